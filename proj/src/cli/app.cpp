#include "kaonpair/cli/app.hpp"

#include "kaonpair/cli/config.hpp"
#include "kaonpair/cli/svg.hpp"
#include "kaonpair/errors.hpp"
#include "kaonpair/kinematics.hpp"
#include "kaonpair/montecarlo.hpp"
#include "kaonpair/tagging.hpp"
#include "kaonpair/th_model.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

namespace kaonpair::cli {

namespace {

// Human-readable output precision.
std::string num(double v) { return fmt::format("{:.12g}", v); }
std::string num(Complex z) { return fmt::format("({:.12g}, {:.12g})", z.real(), z.imag()); }

struct Options {
    std::string config_path;

    std::string f1;
    std::string f2;
    double t1 = 0.0;
    double t2 = 0.0;

    std::string channel;
    double kappa = 100.0;
    std::size_t points = 301;
    std::string csv_path = "fig1.csv";
    std::string svg_path = "fig1.svg";

    std::string kind;
    double bound = 0.0;

    std::string out_path = "events.csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n_events;
    std::optional<double> t_max;
    std::optional<double> beta_k;
    unsigned threads = 0;
};

RunConfig load(const Options& o)
{
    return o.config_path.empty() ? default_config() : load_config(o.config_path);
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return file;
}

int cmd_intensity(const Options& o, std::ostream& out)
{
    const LyContext ctx = load(o).context();
    const double ly = ly_intensity(o.f1, o.t1, o.f2, o.t2, ctx);
    const ThBreakdown th = th_intensity(o.f1, o.t1, o.f2, o.t2, ctx);
    const double scale = std::max(ly, th.total);
    const double rel = scale > 0.0 ? std::abs(th.total - ly) / scale : 0.0;

    fmt::print(out, "f1 = {}  t1 = {}  f2 = {}  t2 = {}\n", o.f1, num(o.t1), o.f2, num(o.t2));
    fmt::print(out, "I_LY         = {}\n", num(ly));
    fmt::print(out, "I_TH         = {}\n", num(th.total));
    fmt::print(out, "rel_diff     = {}\n", num(rel));
    fmt::print(out, "step1_prob   = {}\n", num(th.step1_prob));
    fmt::print(out, "step2_amp    = {}  |.|^2 = {}\n", num(th.step2_amp), num(std::norm(th.step2_amp)));
    fmt::print(out, "step3_prob   = {}\n", num(th.step3_prob));
    fmt::print(out, "step4_amp    = {}  |.|^2 = {}\n", num(th.step4_amp), num(std::norm(th.step4_amp)));
    return kExitOk;
}

int cmd_fig1(const Options& o, std::ostream& out)
{
    const RunConfig config = load(o);
    const LyContext ctx = config.context();
    const std::string channel = o.channel.empty() ? config.channels.front().id : o.channel;
    const std::vector<double> grid = uniform_grid(o.t2, o.points);
    const Fig1Curves curves = fig1_curves(channel, o.t2, o.kappa, grid, ctx);

    {
        std::ofstream csv = open_output(o.csv_path);
        csv << "t1,interference,decoherence,total_width\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            fmt::print(csv, "{:.17g},{:.17g},{:.17g},{:.17g}\n", curves.t1_grid[i], curves.interference[i], curves.decoherence[i],
                       curves.total_width[i]);
        if (!csv)
            throw std::runtime_error("failed writing '" + o.csv_path + "'");
    }

    LinePlot plot;
    plot.title = fmt::format("t1 distribution, f1 = f2 = {}", channel);
    plot.x_label = "t1 / tau_S";
    plot.y_label = "rate (normalised at t1 = 0)";
    plot.series.push_back({fmt::format("f2 observed at t2 = {:g} tau_S", o.t2), curves.t1_grid, curves.interference, LineStyle::solid});
    plot.series.push_back({"decoherence region (K_S tag)", curves.t1_grid, curves.decoherence, LineStyle::dashed});
    plot.series.push_back({fmt::format("no t2 condition, Gamma_L x {:g}", o.kappa), curves.t1_grid, curves.total_width, LineStyle::dotted});
    {
        std::ofstream svg = open_output(o.svg_path);
        svg << plot.render();
        if (!svg)
            throw std::runtime_error("failed writing '" + o.svg_path + "'");
    }

    fmt::print(out, "fig1: channel {}  t2 = {}  kappa = {}  {} points\n", channel, num(o.t2), num(o.kappa), grid.size());
    fmt::print(out, "wrote {} and {}\n", o.csv_path, o.svg_path);
    return kExitOk;
}

int cmd_tag(const Options& o, std::ostream& out)
{
    const LyContext ctx = load(o).context();
    const DecayChannel& channel = ctx.channel(o.channel);
    TagReport report;
    if (o.kind == "KL" || o.kind == "KL_tag") {
        const double dt = kl_tag_delta_t(channel, o.bound, ctx.params());
        report = living_partner_purity(channel.id(), dt, ctx);
    } else if (o.kind == "KS" || o.kind == "KS_tag") {
        const double dt = ks_tag_delta_t(channel, o.bound, ctx.params());
        report = past_state_purity(channel.id(), dt, 0.0, ctx);
    } else {
        throw DomainError("tag: --kind must be KL or KS");
    }
    fmt::print(out, "kind          = {}\n", to_string(report.kind));
    fmt::print(out, "channel       = {}\n", report.channel);
    fmt::print(out, "|eta|         = {}\n", num(std::abs(channel.eta())));
    fmt::print(out, "bound         = {}\n", num(o.bound));
    fmt::print(out, "delta_t       = {}\n", num(report.delta_t));
    fmt::print(out, "contamination = {}\n", num(report.contamination));
    fmt::print(out, "purity        = {}\n", num(report.purity));
    return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out)
{
    const RunConfig config = load(o);
    GeneratorConfig g = config.generator_config();
    if (o.seed)
        g.seed = *o.seed;
    if (o.n_events)
        g.n_events = *o.n_events;
    if (o.t_max)
        g.t_max = *o.t_max;
    if (o.beta_k)
        g.beta_k = *o.beta_k;

    const EventGenerator generator(g, config.context());
    const auto start = std::chrono::steady_clock::now();
    const std::vector<EventRecord> events = generator.generate(o.threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::uint64_t hash = config_hash(g, generator.context());
    {
        std::ofstream file = open_output(o.out_path);
        write_events(file, events, g.seed, hash);
        if (!file)
            throw std::runtime_error("failed writing '" + o.out_path + "'");
    }

    std::size_t time_like = 0;
    for (const auto& e : events)
        time_like += e.causal_class == CausalClass::time_like ? 1 : 0;

    fmt::print(out, "generated {} events in {:.3f} s (seed {}, config_hash {:016x})\n", events.size(), seconds, g.seed, hash);
    fmt::print(out, "t_max = {}  truncated G fraction = {}\n", num(g.t_max), num(generator.truncated_fraction()));
    if (g.beta_k)
        fmt::print(out, "beta_k = {}  R = {}  time_like fraction = {}\n", num(*g.beta_k), num(CmKinematics(*g.beta_k).ratio_r()),
                   num(static_cast<double>(time_like) / static_cast<double>(events.size())));
    fmt::print(out, "wrote {}\n", o.out_path);
    return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out)
{
    const CmKinematics kin(o.beta_k.value_or(0.0));
    const CausalClass c = classify(o.t1, o.t2, kin);
    fmt::print(out, "{}\n", to_string(c));
    fmt::print(out, "t1/t2 = {}  R = {}\n", num(o.t1 / o.t2), num(kin.ratio_r()));
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Entangled neutral-kaon pair: intensities, state tags, Figure-1 curves and event generation", "kaonpair"};
    app.require_subcommand(1);
    app.add_option("--config", o.config_path, "Configuration file (default: built-in constants)");

    auto* intensity = app.add_subcommand("intensity", "Double-decay intensity by both formulations");
    intensity->add_option("--f1", o.f1, "First decay channel")->required();
    intensity->add_option("--t1", o.t1, "First decay time / tau_S")->required();
    intensity->add_option("--f2", o.f2, "Second decay channel")->required();
    intensity->add_option("--t2", o.t2, "Second decay time / tau_S")->required();

    auto* fig1 = app.add_subcommand("fig1", "First-decay time distributions with f2 = f1 (CSV + SVG)");
    o.t2 = 3.0;
    fig1->add_option("--channel", o.channel, "Channel f1 = f2 (default: first configured)");
    fig1->add_option("--t2", o.t2, "Future decay time / tau_S")->capture_default_str();
    fig1->add_option("--kappa", o.kappa, "Display factor on Gamma_L in the comparison curve")->capture_default_str();
    fig1->add_option("--points", o.points, "Grid points on [0, t2]")->capture_default_str();
    fig1->add_option("--csv", o.csv_path, "CSV output")->capture_default_str();
    fig1->add_option("--svg", o.svg_path, "SVG output")->capture_default_str();

    auto* tag = app.add_subcommand("tag", "Interval needed for a K_L or K_S tag of given contamination");
    tag->add_option("--kind", o.kind, "KL or KS")->required();
    tag->add_option("--channel", o.channel, "Tagging channel")->required();
    tag->add_option("--bound", o.bound, "Contamination bound")->required();

    auto* gen = app.add_subcommand("generate", "Monte Carlo double-decay events");
    gen->add_option("--out", o.out_path, "Event CSV output")->capture_default_str();
    gen->add_option("--seed", o.seed, "Seed override");
    gen->add_option("--n-events", o.n_events, "Event count override");
    gen->add_option("--t-max", o.t_max, "Interval cutoff override / tau_S");
    gen->add_option("--beta-k", o.beta_k, "CM kaon velocity override");
    gen->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();

    auto* cls = app.add_subcommand("classify", "Space-like / time-like class of two decays");
    cls->add_option("--t1", o.t1, "First decay time")->required();
    cls->add_option("--t2", o.t2, "Second decay time")->required();
    cls->add_option("--beta-k", o.beta_k, "CM kaon velocity")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (intensity->parsed())
            return cmd_intensity(o, out);
        if (fig1->parsed())
            return cmd_fig1(o, out);
        if (tag->parsed())
            return cmd_tag(o, out);
        if (gen->parsed())
            return cmd_generate(o, out);
        if (cls->parsed())
            return cmd_classify(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateBasisError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

} // namespace kaonpair::cli

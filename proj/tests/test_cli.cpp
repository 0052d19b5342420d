#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kaonpair/cli/app.hpp"
#include "kaonpair/cli/config.hpp"
#include "kaonpair/cli/svg.hpp"
#include "kaonpair/kinematics.hpp"
#include "kaonpair/montecarlo.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace kaonpair;
using namespace kaonpair::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "kaonpair");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("kaonpair_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& path, const std::string& text)
{
    std::ofstream(path) << text;
    return path;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kFig1Config = R"(gamma_s = 1.0
gamma_l = 0.002
delta_m = 0.47
epsilon_s_re = 0.0016
epsilon_s_im = 0.0015
epsilon_l_re = 0.0016
epsilon_l_im = 0.0015

[channel pp]
eta_abs = 0.0022
eta_phase = 0.76
amp_s_abs = 0.83

[channel lv]   # semileptonic
eta_abs = 1.0
amp_s_abs = 0.019
)";

// Gamma_S - Gamma_L = 1 so the tag intervals are 2 ln(bound ratio).
const char* kTagConfig = R"(gamma_s = 1.5
gamma_l = 0.5
delta_m = 0.47

[channel small]
eta_abs = 0.002
eta_phase = 0.4

[generate]
t_max = 40
n_events = 5000
seed = 12
beta_k = 0.22
)";

double field(const std::string& text, const std::string& key)
{
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size()));
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("configuration parsing")
{
    std::istringstream in(kFig1Config);
    const RunConfig c = parse_config(in);
    CHECK(c.physics.gamma_l() == 0.002);
    CHECK(c.cp.epsilon_s() == Complex(0.0016, 0.0015));
    REQUIRE(c.channels.size() == 2);
    CHECK(c.channels[0].id == "pp");
    CHECK(c.channels[0].eta_phase == 0.76);
    CHECK(c.channels[1].eta_phase == 0.0);
    CHECK(c.channels[1].weight == 1.0);
    CHECK(c.context().channel("lv").eta() == Complex(1.0, 0.0));
    CHECK(!c.generate.t_max);
    CHECK(c.generator_config().t_max == std::log(1e7) / 0.002);

    const RunConfig d = default_config();
    CHECK(d.channels.size() == 4);
    CHECK(d.generate.beta_k == 0.22);
    CHECK(default_config_text().find("[channel pipi_charged]") != std::string_view::npos);
}

TEST_CASE("configuration errors carry line numbers")
{
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            parse_config(in, "bad.cfg");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).rfind("bad.cfg", 0) == 0);
            return e.line();
        }
        FAIL("accepted");
        return 0;
    };
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = x\n[channel a]\neta_abs = 1\n") == 3);
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = 1\n\n[channel a]\neta_abs = 1\ncolour = red\n") == 7);
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = 1\n[channel a]\neta_abs = 1\n[channel a]\neta_abs = 2\n") == 6);
    CHECK(line_of("gamma_s = 1\ngamma_l = 2\ndelta_m = 1\n[channel a]\neta_abs = 1\n") == 1);
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = 1\n[channel a]\neta_abs = 1\n[generate]\nbeta_k = 1\n") == 7);
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = 1\n[channel a\n") == 4);
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = 1\n[kaon a]\n") == 4);
    CHECK(line_of("gamma_s = 1\ngamma_l = 0.5\ndelta_m = 1\n") == 0);
    CHECK(line_of("gamma_s = 1\ndelta_m = 1\n[channel a]\neta_abs = 1\n") == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/kaonpair.cfg"), ConfigError);
}

TEST_CASE("intensity command")
{
    const fs::path dir = scratch("intensity");
    const std::string cfg = write_file(dir / "run.cfg", kFig1Config).string();

    const Result r = invoke({"--config", cfg, "intensity", "--f1", "pp", "--t1", "0.5", "--f2", "lv", "--t2", "2"});
    CHECK(r.code == kExitOk);
    CHECK(field(r.out, "I_LY         = ") > 0.0);
    CHECK(field(r.out, "rel_diff     = ") < 1e-12);

    const Result zero = invoke({"--config", cfg, "intensity", "--f1", "pp", "--t1", "2", "--f2", "pp", "--t2", "2"});
    CHECK(zero.code == kExitOk);
    CHECK(field(zero.out, "I_LY         = ") == 0.0);
    CHECK(field(zero.out, "I_TH         = ") == 0.0);

    CHECK(invoke({"intensity", "--f1", "pipi_charged", "--t1", "1", "--f2", "semilep_plus", "--t2", "4"}).code == kExitOk);

    const Result missing = invoke({"--config", cfg, "intensity", "--f1", "nope", "--t1", "0", "--f2", "pp", "--t2", "1"});
    CHECK(missing.code == kExitUsage);
    CHECK(missing.err.find("nope") != std::string::npos);
    CHECK(invoke({"--config", cfg, "intensity", "--f1", "pp", "--t1", "3", "--f2", "pp", "--t2", "1"}).code == kExitUsage);
    CHECK(invoke({"--config", cfg, "intensity", "--f1", "pp"}).code == kExitUsage);
    CHECK(invoke({"--config", (dir / "absent.cfg").string(), "intensity", "--f1", "pp", "--t1", "0", "--f2", "pp", "--t2", "1"}).code
          == kExitUsage);
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("fig1 command")
{
    const fs::path dir = scratch("fig1");
    const std::string cfg = write_file(dir / "run.cfg", kFig1Config).string();
    const fs::path csv = dir / "fig1.csv";
    const fs::path svg = dir / "fig1.svg";

    const Result r = invoke({"--config", cfg, "fig1", "--channel", "pp", "--csv", csv.string(), "--svg", svg.string()});
    REQUIRE(r.code == kExitOk);
    const auto rows = csv_rows(read_file(csv));
    REQUIRE(rows.size() == 302);
    CHECK(rows[0] == std::vector<std::string>{"t1", "interference", "decoherence", "total_width"});
    CHECK(rows[1] == std::vector<std::string>{"0", "1", "1", "1"});
    CHECK(std::stod(rows[301][0]) == 3.0);
    CHECK(std::stod(rows[301][1]) == 0.0);
    CHECK(std::abs(std::stod(rows[101][3]) - 0.301194) < 1e-6);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 4);
        const double t1 = std::stod(rows[i][0]);
        CHECK(std::abs(std::stod(rows[i][2]) - std::exp(-t1)) < 1e-14);
    }
    const std::string picture = read_file(svg);
    CHECK(picture.rfind("<svg", 0) == 0);
    CHECK(picture.find("</svg>") != std::string::npos);

    CHECK(invoke({"--config", cfg, "fig1", "--channel", "pp", "--points", "1", "--csv", csv.string(), "--svg", svg.string()}).code
          == kExitUsage);
    CHECK(invoke({"--config", cfg, "fig1", "--csv", (dir / "no" / "such" / "x.csv").string(), "--svg", svg.string()}).code
          == kExitRuntime);
}

TEST_CASE("tag command")
{
    const fs::path dir = scratch("tag");
    const std::string cfg = write_file(dir / "run.cfg", kTagConfig).string();

    const Result ks = invoke({"--config", cfg, "tag", "--kind", "KS", "--channel", "small", "--bound", "0.01"});
    REQUIRE(ks.code == kExitOk);
    CHECK(ks.out.find("KS_tag") != std::string::npos);
    CHECK(std::abs(field(ks.out, "delta_t       = ") - 21.64) < 5e-3);
    CHECK(std::abs(field(ks.out, "contamination = ") - 0.01) < 1e-12);

    const Result kl = invoke({"--config", cfg, "tag", "--kind", "KL", "--channel", "small", "--bound", "1e-5"});
    REQUIRE(kl.code == kExitOk);
    CHECK(std::abs(field(kl.out, "delta_t       = ") - 10.597) < 1e-3);

    CHECK(invoke({"--config", cfg, "tag", "--kind", "KS", "--channel", "small", "--bound", "0"}).code == kExitUsage);
    CHECK(invoke({"--config", cfg, "tag", "--kind", "KS", "--channel", "small", "--bound", "-1"}).code == kExitUsage);
    CHECK(invoke({"--config", cfg, "tag", "--kind", "KX", "--channel", "small", "--bound", "0.1"}).code == kExitUsage);
    CHECK(invoke({"--config", cfg, "tag", "--kind", "KS", "--channel", "big", "--bound", "0.1"}).code == kExitUsage);
}

TEST_CASE("classify command")
{
    const Result a = invoke({"classify", "--t1", "0.5", "--t2", "1", "--beta-k", "0.22"});
    CHECK(a.code == kExitOk);
    CHECK(a.out.rfind("time_like\n", 0) == 0);
    CHECK(invoke({"classify", "--t1", "0.5", "--t2", "1", "--beta-k", "0.95"}).out.rfind("space_like\n", 0) == 0);
    CHECK(invoke({"classify", "--t1", "1", "--t2", "1", "--beta-k", "0"}).out.rfind("light_like\n", 0) == 0);
    CHECK(invoke({"classify", "--t1", "0", "--t2", "0", "--beta-k", "0.22"}).code == kExitUsage);
    CHECK(invoke({"classify", "--t1", "0.5", "--t2", "1", "--beta-k", "1"}).code == kExitUsage);
    CHECK(invoke({"classify", "--t1", "0.5", "--t2", "1"}).code == kExitUsage);
}

TEST_CASE("generate command")
{
    const fs::path dir = scratch("generate");
    const std::string cfg = write_file(dir / "run.cfg", kTagConfig).string();
    const fs::path first = dir / "a.csv";
    const fs::path second = dir / "b.csv";

    const Result r = invoke({"--config", cfg, "generate", "--out", first.string(), "--threads", "1"});
    REQUIRE(r.code == kExitOk);
    REQUIRE(invoke({"--config", cfg, "generate", "--out", second.string(), "--threads", "3"}).code == kExitOk);
    CHECK(read_file(first) == read_file(second));

    std::ifstream in(first);
    const EventFile file = read_events(in);
    CHECK(file.seed == 12);
    REQUIRE(file.events.size() == 5000);

    // Summary fraction agrees with classifying the written times afresh.
    const CmKinematics kin(0.22);
    std::size_t time_like = 0;
    for (const auto& e : file.events) {
        CHECK(classify(e.t1, e.t2, kin) == e.causal_class);
        time_like += e.causal_class == CausalClass::time_like ? 1 : 0;
    }
    CHECK(std::abs(field(r.out, "time_like fraction = ") - static_cast<double>(time_like) / 5000.0) < 1e-12);

    // 17 significant digits reproduce the doubles exactly.
    std::istringstream in_again(read_file(first));
    std::ostringstream out_again;
    const EventFile again = read_events(in_again);
    write_events(out_again, again.events, again.seed, again.config_hash);
    CHECK(out_again.str() == read_file(first));

    REQUIRE(invoke({"--config", cfg, "generate", "--out", second.string(), "--seed", "13"}).code == kExitOk);
    CHECK(read_file(first) != read_file(second));

    CHECK(invoke({"--config", cfg, "generate", "--out", second.string(), "--beta-k", "1.5"}).code == kExitUsage);
    CHECK(invoke({"--config", cfg, "generate", "--out", (dir / "no" / "x.csv").string()}).code == kExitRuntime);

    // A channel with eta = 0 cannot yield a pair: the generator has nothing to sample.
    const std::string dead = write_file(dir / "dead.cfg", "gamma_s = 1\ngamma_l = 0.5\ndelta_m = 0.4\n[channel z]\neta_abs = 0\n").string();
    const Result failed = invoke({"--config", dead, "generate", "--out", second.string(), "--t-max", "10", "--n-events", "10"});
    CHECK(failed.code == kExitRuntime);
    CHECK(!failed.err.empty());
}

TEST_CASE("svg plot")
{
    LinePlot plot;
    plot.title = "a < b & c";
    plot.series.push_back({"s", {0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}, LineStyle::dashed});
    const std::string text = plot.render();
    CHECK(text.find("a &lt; b &amp; c") != std::string::npos);
    CHECK(text.find("<polyline") != std::string::npos);
}

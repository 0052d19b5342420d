#include "kaonpair/montecarlo.hpp"

#include "kaonpair/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

namespace kaonpair {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64_mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// int_a^b e^{-g x} dx
double exp_integral(double g, double a, double b)
{
    const double ea = std::exp(-g * a);
    const double eb = std::isinf(b) ? 0.0 : std::exp(-g * b);
    return (ea - eb) / g;
}

// int_a^b e^{-g x} cos(w x + phi) dx
double damped_cos_integral(double g, double w, double phi, double a, double b)
{
    auto antiderivative = [&](double x) {
        if (std::isinf(x))
            return 0.0;
        return std::exp(-g * x) * (w * std::sin(w * x + phi) - g * std::cos(w * x + phi)) / (g * g + w * w);
    };
    return antiderivative(b) - antiderivative(a);
}

// Parameters of G without C12; G(dt) = c12 * bracket(dt).
struct IntervalShape {
    double c12 = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double phase = 0.0; // phi1 - phi2
    double gamma_s = 0.0;
    double gamma_l = 0.0;
    double delta_m = 0.0;

    IntervalShape(std::string_view f1, std::string_view f2, const LyContext& ctx)
    {
        const DecayChannel& c1 = ctx.channel(f1);
        const DecayChannel& c2 = ctx.channel(f2);
        c12 = kaonpair::c12(f1, f2, ctx);
        eta1 = std::abs(c1.eta());
        eta2 = std::abs(c2.eta());
        phase = std::arg(c1.eta()) - std::arg(c2.eta());
        gamma_s = ctx.params().gamma_s();
        gamma_l = ctx.params().gamma_l();
        delta_m = ctx.params().delta_m();
    }

    double half_width() const { return 0.5 * (gamma_s + gamma_l); }

    double bracket(double dt) const
    {
        return eta1 * eta1 * std::exp(-gamma_s * dt) + eta2 * eta2 * std::exp(-gamma_l * dt)
            - 2.0 * eta1 * eta2 * std::exp(-half_width() * dt) * std::cos(delta_m * dt + phase);
    }

    double envelope_bracket(double dt) const
    {
        return eta1 * eta1 * std::exp(-gamma_s * dt) + eta2 * eta2 * std::exp(-gamma_l * dt)
            + 2.0 * eta1 * eta2 * std::exp(-half_width() * dt);
    }

    // Envelope mixture: coefficient and rate of each exponential term.
    std::array<std::pair<double, double>, 3> envelope_terms() const
    {
        return {{{eta1 * eta1, gamma_s}, {eta2 * eta2, gamma_l}, {2.0 * eta1 * eta2, half_width()}}};
    }

    double bracket_integral(double a, double b) const
    {
        return eta1 * eta1 * exp_integral(gamma_s, a, b) + eta2 * eta2 * exp_integral(gamma_l, a, b)
            - 2.0 * eta1 * eta2 * damped_cos_integral(half_width(), delta_m, phase, a, b);
    }

    double envelope_bracket_integral(double a, double b) const
    {
        double sum = 0.0;
        for (const auto& [coeff, rate] : envelope_terms())
            sum += coeff * exp_integral(rate, a, b);
        return sum;
    }
};

// Per-pair sampler state, precomputed once.
struct PairSampler {
    IntervalShape shape;
    std::array<double, 3> rates{};
    std::array<double, 3> tail_mass{}; // 1 - e^{-rate t_max}
    std::array<double, 3> cumulative{};

    PairSampler(const IntervalShape& s, double t_max) : shape(s)
    {
        const auto terms = s.envelope_terms();
        double acc = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            rates[k] = terms[k].second;
            tail_mass[k] = -std::expm1(-rates[k] * t_max);
            acc += terms[k].first * tail_mass[k] / rates[k];
            cumulative[k] = acc;
        }
        for (auto& c : cumulative)
            c /= acc;
    }
};

std::size_t pick(std::span<const double> cumulative, double u)
{
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(idx, cumulative.size() - 1);
}

std::string canonical(double v) { return fmt::format("{:.17g}", v); }

std::string canonical(Complex z) { return canonical(z.real()) + "," + canonical(z.imag()); }

double parse_double(std::string_view text, std::size_t line)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DomainError(fmt::format("events line {}: malformed number '{}'", line, text));
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

CausalClass parse_class(std::string_view text, std::size_t line)
{
    for (CausalClass c : {CausalClass::space_like, CausalClass::time_like, CausalClass::light_like, CausalClass::unclassified})
        if (to_string(c) == text)
            return c;
    throw DomainError(fmt::format("events line {}: unknown causal class '{}'", line, text));
}

// Bins with expected count below this are merged.
constexpr double kMinExpected = 5.0;

ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected, int constraints)
{
    ChiSquare out;
    double obs = 0.0;
    double exp = 0.0;
    int groups = 0;
    double last_term_obs = 0.0;
    double last_term_exp = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        obs += observed[i];
        exp += expected[i];
        if (exp >= kMinExpected) {
            out.chi2 += (obs - exp) * (obs - exp) / exp;
            last_term_obs = obs;
            last_term_exp = exp;
            ++groups;
            obs = 0.0;
            exp = 0.0;
        }
    }
    if (obs > 0.0 || exp > 0.0) {
        if (groups == 0) {
            out.chi2 = exp > 0.0 ? (obs - exp) * (obs - exp) / exp : (obs > 0.0 ? kInfinity : 0.0);
            groups = 1;
        } else {
            // Fold the leftover tail into the last emitted group.
            out.chi2 -= (last_term_obs - last_term_exp) * (last_term_obs - last_term_exp) / last_term_exp;
            const double o = last_term_obs + obs;
            const double e = last_term_exp + exp;
            out.chi2 += (o - e) * (o - e) / e;
        }
    }
    out.dof = groups - constraints;
    return out;
}

// Histogram of t1 on [0, t_end) with an overflow bin, against Gamma e^{-Gamma t}.
ChiSquare fit_t1(std::span<const double> t1, double gamma, std::size_t bins)
{
    const double t_end = std::log(1e4) / gamma;
    const double width = t_end / static_cast<double>(bins);
    std::vector<double> observed(bins + 1, 0.0);
    std::vector<double> expected(bins + 1, 0.0);
    for (double t : t1) {
        const auto idx = t >= t_end ? bins : static_cast<std::size_t>(t / width);
        observed[std::min(idx, bins)] += 1.0;
    }
    const double n = static_cast<double>(t1.size());
    for (std::size_t i = 0; i < bins; ++i) {
        const double lo = width * static_cast<double>(i);
        expected[i] = n * (std::exp(-gamma * lo) - std::exp(-gamma * (lo + width)));
    }
    expected[bins] = n * std::exp(-gamma * t_end);
    return chi_square(observed, expected, 1);
}

} // namespace

void validate(const GeneratorConfig& config)
{
    if (config.n_events < 1)
        throw DomainError("generator: n_events must be at least 1");
    if (!(config.t_max > 0.0) || !std::isfinite(config.t_max))
        throw DomainError("generator: t_max must be positive and finite");
    if (config.channels.empty())
        throw DomainError("generator: no channels");
    double sum = 0.0;
    for (const auto& c : config.channels) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw DomainError("generator: channel '" + c.id + "' has a negative or non-finite weight");
        sum += c.weight;
    }
    if (!(sum > 0.0))
        throw DomainError("generator: channel weights sum to zero");
    if (config.beta_k)
        CmKinematics{*config.beta_k};
    if (config.max_attempts_per_event < 1)
        throw DomainError("generator: attempt budget must be positive");
}

std::uint64_t partition_seed(std::uint64_t seed, std::uint64_t partition)
{
    return splitmix64_mix(seed + (partition + 1) * 0x9E3779B97F4A7C15ULL);
}

double interval_integral(std::string_view f1, std::string_view f2, double a, double b, const LyContext& ctx)
{
    if (!(a >= 0.0) || !(b >= a))
        throw DomainError("interval_integral: requires 0 <= a <= b");
    const IntervalShape shape(f1, f2, ctx);
    return shape.c12 * shape.bracket_integral(a, b);
}

double interval_integral_quadrature(std::string_view f1, std::string_view f2, double a, double b, const LyContext& ctx)
{
    if (!(a >= 0.0) || !(b >= a) || std::isinf(b))
        throw DomainError("interval_integral_quadrature: requires 0 <= a <= b < inf");
    const IntervalShape shape(f1, f2, ctx);
    auto f = [&](double x) { return shape.bracket(x); };
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
    return shape.c12 * value;
}

EventGenerator::EventGenerator(GeneratorConfig config, LyContext ctx) : config_(std::move(config)), ctx_(std::move(ctx))
{
    validate(config_);
    if (config_.beta_k)
        kinematics_.emplace(*config_.beta_k);

    double total = 0.0;
    for (const auto& a : config_.channels) {
        for (const auto& b : config_.channels) {
            const IntervalShape shape(a.id, b.id, ctx_);
            PairWeight p;
            p.f1 = a.id;
            p.f2 = b.id;
            p.g_integral = shape.c12 * shape.bracket_integral(0.0, config_.t_max);
            p.envelope_integral = shape.c12 * shape.envelope_bracket_integral(0.0, config_.t_max);
            const double full = shape.c12 * shape.bracket_integral(0.0, kInfinity);
            p.truncated_fraction = full > 0.0 ? std::max(0.0, 1.0 - p.g_integral / full) : 0.0;
            p.probability = a.weight * b.weight * std::max(0.0, p.g_integral);
            total += p.probability;
            pairs_.push_back(std::move(p));
        }
    }
    if (!(total > 0.0))
        throw GenerationError("generator: every channel pair has zero integrated intensity");
    double acc = 0.0;
    for (auto& p : pairs_) {
        p.probability /= total;
        acc += p.probability;
        cumulative_.push_back(acc);
    }
}

double EventGenerator::truncated_fraction() const
{
    double sum = 0.0;
    for (const auto& p : pairs_)
        sum += p.probability * p.truncated_fraction;
    return sum;
}

std::uint64_t EventGenerator::partition_count() const
{
    return (config_.n_events + kEventsPerPartition - 1) / kEventsPerPartition;
}

std::vector<EventRecord> EventGenerator::generate_partition(std::uint64_t index) const
{
    if (index >= partition_count())
        throw DomainError("generate_partition: index out of range");
    const std::uint64_t first = index * kEventsPerPartition;
    const std::uint64_t count = std::min(kEventsPerPartition, config_.n_events - first);

    std::vector<PairSampler> samplers;
    samplers.reserve(pairs_.size());
    for (const auto& p : pairs_)
        samplers.emplace_back(IntervalShape(p.f1, p.f2, ctx_), config_.t_max);

    std::mt19937_64 rng(partition_seed(config_.seed, index));
    const double gamma = ctx_.params().total_width();

    std::vector<EventRecord> events;
    events.reserve(count);
    for (std::uint64_t n = 0; n < count; ++n) {
        const std::size_t pair = pick(cumulative_, uniform01(rng));
        const PairSampler& s = samplers[pair];
        const double t1 = -std::log1p(-uniform01(rng)) / gamma;

        double dt = 0.0;
        bool accepted = false;
        for (std::uint64_t attempt = 0; attempt < config_.max_attempts_per_event; ++attempt) {
            const std::size_t k = pick(s.cumulative, uniform01(rng));
            dt = -std::log1p(-uniform01(rng) * s.tail_mass[k]) / s.rates[k];
            dt = std::min(dt, config_.t_max);
            const double target = s.shape.bracket(dt);
            const double envelope = s.shape.envelope_bracket(dt);
            if (target > envelope * (1.0 + 1e-12))
                throw GenerationError(fmt::format("envelope violated for pair ({}, {}) at dt = {:.17g}: density {:.17g} > envelope {:.17g}",
                                                  pairs_[pair].f1, pairs_[pair].f2, dt, target, envelope));
            if (uniform01(rng) * envelope <= target) {
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw GenerationError(fmt::format("no dt accepted for pair ({}, {}) within {} attempts", pairs_[pair].f1,
                                              pairs_[pair].f2, config_.max_attempts_per_event));

        EventRecord e;
        e.f1 = pairs_[pair].f1;
        e.f2 = pairs_[pair].f2;
        e.t1 = t1;
        e.t2 = t1 + dt;
        if (kinematics_ && e.t2 > 0.0)
            e.causal_class = classify(e.t1, e.t2, *kinematics_);
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<EventRecord> EventGenerator::generate(unsigned threads) const
{
    const std::uint64_t parts = partition_count();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, parts));

    std::vector<std::vector<EventRecord>> chunks(parts);
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < parts; ++i)
            chunks[i] = generate_partition(i);
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::uint64_t i = w; i < parts; i += threads)
                        chunks[i] = generate_partition(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        }
        for (auto& t : workers)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    std::vector<EventRecord> events;
    events.reserve(config_.n_events);
    for (auto& c : chunks)
        std::move(c.begin(), c.end(), std::back_inserter(events));
    return events;
}

std::vector<EventRecord> generate(const GeneratorConfig& config, const LyContext& ctx)
{
    return EventGenerator(config, ctx).generate();
}

std::uint64_t config_hash(const GeneratorConfig& config, const LyContext& ctx)
{
    std::string text;
    const PhysicsParams& p = ctx.params();
    text += "gamma_s=" + canonical(p.gamma_s()) + ";gamma_l=" + canonical(p.gamma_l()) + ";delta_m=" + canonical(p.delta_m());
    text += ";epsilon_s=" + canonical(ctx.cp().epsilon_s()) + ";epsilon_l=" + canonical(ctx.cp().epsilon_l());
    for (const auto& c : ctx.channels())
        text += ";channel=" + c.id() + ":" + canonical(c.eta()) + ":" + canonical(c.amp_s());
    for (const auto& c : config.channels)
        text += ";weight=" + c.id + ":" + canonical(c.weight);
    text += ";t_max=" + canonical(config.t_max) + ";n_events=" + std::to_string(config.n_events);
    text += ";seed=" + std::to_string(config.seed);
    text += ";beta_k=" + (config.beta_k ? canonical(*config.beta_k) : std::string("none"));
    text += ";events_per_partition=" + std::to_string(kEventsPerPartition);

    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

void write_events(std::ostream& out, std::span<const EventRecord> events, std::uint64_t seed, std::uint64_t hash)
{
    out << fmt::format("# kaonpair-events seed={} config_hash={:016x}\n", seed, hash);
    out << "f1,f2,t1,t2,causal_class\n";
    fmt::memory_buffer buf;
    for (const auto& e : events) {
        buf.clear();
        fmt::format_to(std::back_inserter(buf), "{},{},{:.17g},{:.17g},{}\n", e.f1, e.f2, e.t1, e.t2, to_string(e.causal_class));
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

EventFile read_events(std::istream& in)
{
    EventFile file;
    std::string line;
    std::size_t number = 0;

    if (!std::getline(in, line))
        throw DomainError("events: empty input");
    ++number;
    {
        std::istringstream header(line);
        std::string hash_marker;
        std::string tag;
        std::string seed_field;
        std::string hash_field;
        header >> hash_marker >> tag >> seed_field >> hash_field;
        if (hash_marker != "#" || tag != "kaonpair-events" || seed_field.rfind("seed=", 0) != 0
            || hash_field.rfind("config_hash=", 0) != 0)
            throw DomainError("events line 1: malformed header");
        const std::string_view s = std::string_view(seed_field).substr(5);
        const std::string_view h = std::string_view(hash_field).substr(12);
        if (std::from_chars(s.data(), s.data() + s.size(), file.seed).ec != std::errc{}
            || std::from_chars(h.data(), h.data() + h.size(), file.config_hash, 16).ec != std::errc{})
            throw DomainError("events line 1: malformed seed or hash");
    }
    if (!std::getline(in, line) || line != "f1,f2,t1,t2,causal_class")
        throw DomainError("events line 2: expected column header");
    ++number;

    while (std::getline(in, line)) {
        ++number;
        if (line.empty())
            continue;
        const auto fields = split(line, ',');
        if (fields.size() != 5)
            throw DomainError(fmt::format("events line {}: expected 5 fields", number));
        EventRecord e;
        e.f1 = std::string(fields[0]);
        e.f2 = std::string(fields[1]);
        e.t1 = parse_double(fields[2], number);
        e.t2 = parse_double(fields[3], number);
        e.causal_class = parse_class(fields[4], number);
        file.events.push_back(std::move(e));
    }
    return file;
}

FitReport empirical_intensity_check(std::span<const EventRecord> events, const EventGenerator& generator, std::size_t bins)
{
    if (events.size() < 1000)
        throw DomainError(fmt::format("empirical_intensity_check: need at least 1000 events, got {}", events.size()));
    if (bins < 2)
        throw DomainError("empirical_intensity_check: need at least two bins");

    const LyContext& ctx = generator.context();
    const double t_max = generator.config().t_max;
    const double gamma = ctx.params().total_width();
    const auto pairs = generator.pairs();

    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        index[{pairs[i].f1, pairs[i].f2}] = i;

    std::vector<std::vector<double>> t1_by_pair(pairs.size());
    std::vector<std::vector<double>> dt_by_pair(pairs.size());
    std::vector<double> all_t1;
    all_t1.reserve(events.size());
    for (const auto& e : events) {
        const auto it = index.find({e.f1, e.f2});
        if (it == index.end())
            throw LookupError("empirical_intensity_check: event pair (" + e.f1 + ", " + e.f2 + ") unknown to the generator");
        t1_by_pair[it->second].push_back(e.t1);
        dt_by_pair[it->second].push_back(e.t2 - e.t1);
        all_t1.push_back(e.t1);
    }

    FitReport report;
    report.events = events.size();
    report.t1_marginal = fit_t1(all_t1, gamma, bins);

    const double width = t_max / static_cast<double>(bins);
    auto bin_of = [&](double dt) { return std::min(static_cast<std::size_t>(std::max(dt, 0.0) / width), bins - 1); };
    std::vector<double> dt_observed(bins, 0.0);
    std::vector<double> dt_expected(bins, 0.0);
    std::vector<double> pair_observed;
    std::vector<double> pair_expected;

    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& dts = dt_by_pair[p];
        pair_observed.push_back(static_cast<double>(dts.size()));
        pair_expected.push_back(pairs[p].probability * static_cast<double>(events.size()));
        if (dts.empty())
            continue;

        const IntervalShape shape(pairs[p].f1, pairs[p].f2, ctx);
        const double norm = shape.bracket_integral(0.0, t_max);
        std::vector<double> observed(bins, 0.0);
        std::vector<double> expected(bins, 0.0);
        for (double dt : dts)
            observed[bin_of(dt)] += 1.0;
        const double n = static_cast<double>(dts.size());
        for (std::size_t i = 0; i < bins; ++i) {
            const double lo = width * static_cast<double>(i);
            const double hi = i + 1 == bins ? t_max : lo + width;
            expected[i] = n * shape.bracket_integral(lo, hi) / norm;
            dt_observed[i] += observed[i];
            dt_expected[i] += expected[i];
        }

        PairFit fit;
        fit.f1 = pairs[p].f1;
        fit.f2 = pairs[p].f2;
        fit.events = dts.size();
        fit.t1 = fit_t1(t1_by_pair[p], gamma, bins);
        fit.delta_t = chi_square(observed, expected, 1);
        report.pairs.push_back(std::move(fit));
    }
    report.delta_t_marginal = chi_square(dt_observed, dt_expected, 1);
    report.pair_counts = chi_square(pair_observed, pair_expected, 1);
    return report;
}

} // namespace kaonpair

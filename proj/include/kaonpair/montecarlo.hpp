#pragma once

// Seeded double-decay event generation.
//
// The joint density factorises as e^{-Gamma t1} G(f1, f2, dt), so t1 is drawn
// exactly from an exponential of rate Gamma, the ordered channel pair from the
// integrated weights w1 w2 int_0^t_max G, and dt by rejection under the
// cosine-free envelope of G.
//
// Stream rule: events are generated in partitions of kEventsPerPartition;
// partition i owns a std::mt19937_64 seeded with partition_seed(seed, i), the
// (i+1)-th output of SplitMix64 started at seed. Partitions are concatenated
// in index order, so the output does not depend on the thread count.

#include "kaonpair/kinematics.hpp"
#include "kaonpair/ly_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kaonpair {

struct ChannelWeight {
    std::string id;
    double weight = 1.0;
};

struct GeneratorConfig {
    std::vector<ChannelWeight> channels;
    double t_max = 0.0;
    std::uint64_t n_events = 0;
    std::uint64_t seed = 0;
    std::optional<double> beta_k;
    std::uint64_t max_attempts_per_event = 1'000'000;
};

/// Throws DomainError unless n_events >= 1, t_max > 0, weights >= 0 with a positive sum.
void validate(const GeneratorConfig& config);

struct EventRecord {
    std::string f1;
    std::string f2;
    double t1 = 0.0;
    double t2 = 0.0;
    CausalClass causal_class = CausalClass::unclassified;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Selection table entry for one ordered channel pair.
struct PairWeight {
    std::string f1;
    std::string f2;
    double probability = 0.0;        ///< normalised selection probability
    double g_integral = 0.0;         ///< int_0^t_max G
    double envelope_integral = 0.0;  ///< int_0^t_max of the envelope
    double truncated_fraction = 0.0; ///< int_t_max^inf G / int_0^inf G
};

inline constexpr std::uint64_t kEventsPerPartition = 8192;

std::uint64_t partition_seed(std::uint64_t seed, std::uint64_t partition);

/// int_a^b G(f1, f2, dt) d(dt) in closed form; b may be +infinity.
double interval_integral(std::string_view f1, std::string_view f2, double a, double b, const LyContext& ctx);
/// The same integral by adaptive Gauss-Kronrod quadrature (finite b only).
double interval_integral_quadrature(std::string_view f1, std::string_view f2, double a, double b, const LyContext& ctx);

class EventGenerator {
public:
    /// Validates the config and builds the pair table. Throws LookupError for unknown channels,
    /// GenerationError when every pair has zero weight.
    EventGenerator(GeneratorConfig config, LyContext ctx);

    const GeneratorConfig& config() const { return config_; }
    const LyContext& context() const { return ctx_; }
    std::span<const PairWeight> pairs() const { return pairs_; }

    /// Probability-weighted fraction of G mass beyond t_max.
    double truncated_fraction() const;

    std::uint64_t partition_count() const;
    std::vector<EventRecord> generate_partition(std::uint64_t index) const;

    /// All partitions, evaluated on up to `threads` workers (0 = hardware concurrency).
    std::vector<EventRecord> generate(unsigned threads = 0) const;

private:
    GeneratorConfig config_;
    LyContext ctx_;
    std::optional<CmKinematics> kinematics_;
    std::vector<PairWeight> pairs_;
    std::vector<double> cumulative_;
};

std::vector<EventRecord> generate(const GeneratorConfig& config, const LyContext& ctx);

/// FNV-1a 64 over a canonical rendering of the generator config and the physics context.
std::uint64_t config_hash(const GeneratorConfig& config, const LyContext& ctx);

/// CSV event file: "# kaonpair-events seed=<seed> config_hash=<16 hex>", a column line
/// "f1,f2,t1,t2,causal_class", then one record per line with times at 17 significant digits.
void write_events(std::ostream& out, std::span<const EventRecord> events, std::uint64_t seed, std::uint64_t hash);

struct EventFile {
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::vector<EventRecord> events;
};

/// Throws DomainError with the offending line number on malformed input.
EventFile read_events(std::istream& in);

struct ChiSquare {
    double chi2 = 0.0;
    int dof = 0;
    double per_dof() const { return dof > 0 ? chi2 / dof : 0.0; }
};

struct PairFit {
    std::string f1;
    std::string f2;
    std::size_t events = 0;
    ChiSquare t1;
    ChiSquare delta_t;
};

struct FitReport {
    std::size_t events = 0;
    ChiSquare t1_marginal;      ///< against Gamma e^{-Gamma t1}
    ChiSquare delta_t_marginal; ///< against G normalised on [0, t_max], mixed over observed pairs
    ChiSquare pair_counts;      ///< observed pair frequencies against the generator's selection table
    std::vector<PairFit> pairs;
};

/// Binned goodness of fit of events against the analytic marginals. Bins with expected count
/// below 5 are merged into their neighbours. Requires at least 1000 events.
FitReport empirical_intensity_check(std::span<const EventRecord> events, const EventGenerator& generator, std::size_t bins = 50);

} // namespace kaonpair

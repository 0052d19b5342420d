#pragma once

// Run configuration: a flat, line-oriented key = value file.
//
//   gamma_s = 1.0              # required, 1/tau_S
//   gamma_l = 1.75e-3          # required
//   delta_m = 0.474            # required, m_L - m_S
//   epsilon_s_re / epsilon_s_im / epsilon_l_re / epsilon_l_im   (default 0)
//
//   [channel <id>]             # one block per decay channel
//   eta_abs = ...              # required, |eta_f|
//   eta_phase = ...            # radians, default 0
//   amp_s_abs = ...            # |<f|T|K_S>|, default 1, must be > 0
//   amp_s_phase = ...          # radians, default 0
//   weight = ...               # generator selection weight, default 1
//
//   [generate]
//   n_events = ...   t_max = ...   seed = ...   beta_k = ...
//
// '#' starts a comment. Keys may appear once per section.

#include "kaonpair/kaon_core.hpp"
#include "kaonpair/ly_model.hpp"
#include "kaonpair/montecarlo.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kaonpair::cli {

/// Parse or validation failure; line() is 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ChannelSpec {
    std::string id;
    double eta_abs = 0.0;
    double eta_phase = 0.0;
    double amp_s_abs = 1.0;
    double amp_s_phase = 0.0;
    double weight = 1.0;

    DecayChannel to_channel() const;
};

struct GenerateSection {
    std::uint64_t n_events = 100000;
    /// Unset means: long enough that the G mass beyond t_max is negligible (see generator_config).
    std::optional<double> t_max;
    std::uint64_t seed = 1;
    std::optional<double> beta_k;
};

struct RunConfig {
    PhysicsParams physics;
    CpParams cp;
    std::vector<ChannelSpec> channels;
    GenerateSection generate;

    LyContext context() const;
    /// Generator settings over every configured channel. An unset t_max becomes ln(1e7)/Gamma_L.
    GeneratorConfig generator_config() const;
};

RunConfig parse_config(std::istream& in, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);
/// The shipped defaults (config/kaon_defaults.cfg, embedded at build time).
RunConfig default_config();
std::string_view default_config_text();

} // namespace kaonpair::cli

#pragma once

// Time-history description of the pair: evolve the entangled state to t1,
// filter particle 1 by its f1 decay, evolve the tagged survivor over dt,
// filter it by its f2 decay.

#include "kaonpair/ly_model.hpp"

#include <string_view>

namespace kaonpair {

/// The four factors of the time-history intensity.
struct ThBreakdown {
    double step1_prob = 0.0; ///< |<Kperp_f1 K_f1|i(t1)>|^2 = e^{-Gamma t1} / 2
    Complex step2_amp{};     ///< <f1|T|Kperp_f1>
    double step3_prob = 0.0; ///< |<Kperp_f2|K_f1(dt)>|^2
    Complex step4_amp{};     ///< <f2|T|Kperp_f2>
    double total = 0.0;      ///< product of the four (squared) factors
};

/// |<Kperp_{not f2}|K_{not f1}(dt)>|^2 with K_{not f1} evolved unnormalised from unit norm.
double transition_probability(std::string_view f1, std::string_view f2, double delta_t, const LyContext& ctx);

/// Step 1 evaluated on the two-kaon tensor: |<Kperp_{not f1} (x) K_{not f1} | i(t1)>|^2.
double entangled_projection_probability(std::string_view f1, double t1, const LyContext& ctx);

/// Requires 0 <= t1 <= t2. total agrees with ly_intensity.
ThBreakdown th_intensity(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx);

} // namespace kaonpair

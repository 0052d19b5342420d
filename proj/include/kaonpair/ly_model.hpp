#pragma once

// Two-decay-times (Lee-Yang) description of the C = -1 kaon pair: particle 1
// decays first, into f1 at t1; particle 2 decays into f2 at t2 >= t1.

#include "kaonpair/kaon_core.hpp"

#include <string_view>
#include <vector>

namespace kaonpair {

/// Physics parameters, stationary basis and the caller-supplied channel catalogue.
class LyContext {
public:
    /// Throws DomainError on duplicate channel ids.
    LyContext(PhysicsParams params, CpParams cp, std::vector<DecayChannel> channels);

    const PhysicsParams& params() const { return params_; }
    const CpParams& cp() const { return cp_; }
    const StationaryStates& basis() const { return basis_; }
    const std::vector<DecayChannel>& channels() const { return channels_; }

    /// Throws LookupError naming the id when absent.
    const DecayChannel& channel(std::string_view id) const;

private:
    PhysicsParams params_;
    CpParams cp_;
    StationaryStates basis_;
    std::vector<DecayChannel> channels_;
};

/// <f1 f2|T|i_{t1,t2}> with N real positive. Requires 0 <= t1 <= t2.
Complex ly_amplitude(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx);

/// |ly_amplitude|^2.
double ly_intensity(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx);

/// C12 {|eta1|^2 e^{-G_L t1 - G_S t2} + |eta2|^2 e^{-G_S t1 - G_L t2}
///      - 2 |eta1||eta2| e^{-G (t1+t2)/2} cos(dm dt + phi1 - phi2)}.
double ly_intensity_closed(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx);

/// |N|^2/2 |<f1|T|K_S><f2|T|K_S>|^2.
double c12(std::string_view f1, std::string_view f2, const LyContext& ctx);

/// Interval density G(dt) with ly_intensity(f1,t1;f2,t1+dt) = e^{-Gamma t1} G(dt).
double interval_density(std::string_view f1, std::string_view f2, double delta_t, const LyContext& ctx);

/// Cosine-free majorant of interval_density:
/// C12 {|eta1|^2 e^{-G_S dt} + |eta2|^2 e^{-G_L dt} + 2 |eta1||eta2| e^{-G dt/2}}.
double interval_envelope(std::string_view f1, std::string_view f2, double delta_t, const LyContext& ctx);

/// Unnormalised state of the surviving partner at t2 after f1 was seen at t1: <f1|T|i_{t1,t2}>.
KaonState first_decay_projection(std::string_view f1, double t1, double t2, const LyContext& ctx);

/// Unnormalised state of the first-decayed kaon at t1 given f2 at t2: <f2|T|i_{t1,t2}>.
KaonState second_decay_projection(std::string_view f2, double t1, double t2, const LyContext& ctx);

/// Normalised living partner after an f1 decay, evolved over delta_t. Equals k_not_f(f1) at delta_t = 0.
KaonState living_partner_state(std::string_view f1, double delta_t, const LyContext& ctx);

/// Unnormalised t = 0 state  eta2 e^{-i lambda_L t2} K_S - e^{-i lambda_S t2} K_L  whose evolution to t1
/// is the past state of the first-decayed kaon.
KaonState past_state_origin(std::string_view f2, double t2, const LyContext& ctx);

/// Stationary coefficients of past_state_origin(f2, t2) evolved to t1:
/// (eta2 e^{-i lambda_L t2} e^{-i lambda_S t1}, -e^{-i lambda_S t2} e^{-i lambda_L t1}).
SlCoefficients past_state_coefficients(std::string_view f2, double t2, double t1, const LyContext& ctx);

/// Normalised state of the first-decayed kaon immediately before t1, given f2 at t2. Requires 0 <= t1 <= t2.
KaonState past_state(std::string_view f2, double t2, double t1, const LyContext& ctx);

} // namespace kaonpair

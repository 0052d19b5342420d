#pragma once

// Decoherence-regime tags. A K_L tag makes the living partner pure K_L after
// a long enough interval; a K_S tag makes the first-decayed kaon, inferred
// from the later decay, pure K_S.

#include "kaonpair/ly_model.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kaonpair {

enum class TagKind { kl_tag, ks_tag };

std::string_view to_string(TagKind k);

struct TagReport {
    TagKind kind = TagKind::kl_tag;
    std::string channel;
    double delta_t = 0.0;
    /// Magnitude ratio of the suppressed to the dominant stationary coefficient.
    double contamination = 0.0;
    /// 1 / (1 + contamination^2).
    double purity = 1.0;
};

/// |eta1| e^{-dGamma dt / 2}.
double kl_tag_contamination(double eta_abs, double delta_t, const PhysicsParams& params);
/// e^{-dGamma dt / 2} / |eta2|.
double ks_tag_contamination(double eta_abs, double delta_t, const PhysicsParams& params);

/// Smallest dt with kl_tag_contamination <= bound; 0 when bound >= |eta1|. Throws DomainError for bound <= 0.
double kl_tag_delta_t(const DecayChannel& f1, double bound, const PhysicsParams& params);
/// Smallest dt with ks_tag_contamination <= bound; 0 when already satisfied. Throws DomainError for bound <= 0.
double ks_tag_delta_t(const DecayChannel& f2, double bound, const PhysicsParams& params);

/// K_S-tag report from the S/L decomposition of past_state(f2, t2, t1).
TagReport past_state_purity(std::string_view f2, double t2, double t1, const LyContext& ctx);
/// K_L-tag report from the S/L decomposition of living_partner_state(f1, dt).
TagReport living_partner_purity(std::string_view f1, double delta_t, const LyContext& ctx);

/// First-decay time distributions with f2 = f1, each divided by its t1 = 0 value.
struct Fig1Curves {
    std::vector<double> t1_grid;
    std::vector<double> interference; ///< future decay observed at t2
    std::vector<double> decoherence;  ///< e^{-Gamma_S t1}
    std::vector<double> total_width;  ///< e^{-(Gamma_S + kappa Gamma_L) t1}
};

/// Grid points must lie in [0, t2] (DomainError otherwise). kappa scales Gamma_L in the comparison curve only.
Fig1Curves fig1_curves(std::string_view f1, double t2, double kappa, std::span<const double> t1_grid, const LyContext& ctx);

/// points >= 2 equally spaced values from 0 to end inclusive; the last equals end exactly.
std::vector<double> uniform_grid(double end, std::size_t points);

} // namespace kaonpair

#pragma once

#include <string_view>

namespace kaonpair {

enum class CausalClass { space_like, time_like, light_like, unclassified };

std::string_view to_string(CausalClass c);

/// Back-to-back equal-mass pair in the CM frame with kaon velocity beta_k.
class CmKinematics {
public:
    /// Requires 0 <= beta_k < 1.
    explicit CmKinematics(double beta_k);

    double beta_k() const { return beta_k_; }
    /// R = (1 - beta_k) / (1 + beta_k), in (0, 1].
    double ratio_r() const { return ratio_r_; }

private:
    double beta_k_;
    double ratio_r_;
};

/// Space-like if t1/t2 > R, time-like if t1/t2 < R, light-like within relative 1e-12 of R.
/// Requires 0 <= t1 <= t2 and t2 > 0.
CausalClass classify(double t1, double t2, const CmKinematics& kin);

} // namespace kaonpair

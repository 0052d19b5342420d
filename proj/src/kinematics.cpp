#include "kaonpair/kinematics.hpp"

#include "kaonpair/errors.hpp"

#include <cmath>

namespace kaonpair {

namespace {
constexpr double kLightLikeTolerance = 1e-12;
}

std::string_view to_string(CausalClass c)
{
    switch (c) {
    case CausalClass::space_like:
        return "space_like";
    case CausalClass::time_like:
        return "time_like";
    case CausalClass::light_like:
        return "light_like";
    case CausalClass::unclassified:
        break;
    }
    return "unclassified";
}

CmKinematics::CmKinematics(double beta_k) : beta_k_(beta_k), ratio_r_((1.0 - beta_k) / (1.0 + beta_k))
{
    if (!(beta_k >= 0.0 && beta_k < 1.0))
        throw DomainError("CmKinematics: beta_k must lie in [0, 1)");
}

CausalClass classify(double t1, double t2, const CmKinematics& kin)
{
    if (!(t2 > 0.0))
        throw DomainError("classify: t2 must be positive");
    if (!(t1 >= 0.0) || t1 > t2)
        throw DomainError("classify: requires 0 <= t1 <= t2");
    const double ratio = t1 / t2;
    const double r = kin.ratio_r();
    if (std::abs(ratio - r) <= kLightLikeTolerance * r)
        return CausalClass::light_like;
    return ratio > r ? CausalClass::space_like : CausalClass::time_like;
}

} // namespace kaonpair

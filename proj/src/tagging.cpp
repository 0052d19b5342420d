#include "kaonpair/tagging.hpp"

#include "kaonpair/errors.hpp"

#include <cmath>

namespace kaonpair {

namespace {

TagReport make_report(TagKind kind, std::string_view channel, double delta_t, double contamination)
{
    return {kind, std::string(channel), delta_t, contamination, 1.0 / (1.0 + contamination * contamination)};
}

void check_bound(double bound, const char* what)
{
    if (!(bound > 0.0) || !std::isfinite(bound))
        throw DomainError(std::string(what) + ": contamination bound must be positive and finite");
}

} // namespace

std::string_view to_string(TagKind k) { return k == TagKind::kl_tag ? "KL_tag" : "KS_tag"; }

double kl_tag_contamination(double eta_abs, double delta_t, const PhysicsParams& params)
{
    return eta_abs * std::exp(-0.5 * params.width_difference() * delta_t);
}

double ks_tag_contamination(double eta_abs, double delta_t, const PhysicsParams& params)
{
    return std::exp(-0.5 * params.width_difference() * delta_t) / eta_abs;
}

double kl_tag_delta_t(const DecayChannel& f1, double bound, const PhysicsParams& params)
{
    check_bound(bound, "kl_tag_delta_t");
    const double eta = std::abs(f1.eta());
    if (bound >= eta)
        return 0.0;
    return 2.0 / params.width_difference() * std::log(eta / bound);
}

double ks_tag_delta_t(const DecayChannel& f2, double bound, const PhysicsParams& params)
{
    check_bound(bound, "ks_tag_delta_t");
    const double eta = std::abs(f2.eta());
    if (eta == 0.0)
        throw DomainError("ks_tag_delta_t: channel '" + f2.id() + "' has eta = 0, the K_S tag is unreachable");
    const double dt = 2.0 / params.width_difference() * std::log(1.0 / (bound * eta));
    return dt > 0.0 ? dt : 0.0;
}

TagReport past_state_purity(std::string_view f2, double t2, double t1, const LyContext& ctx)
{
    const SlCoefficients c = sl_decompose(past_state(f2, t2, t1, ctx), ctx.basis());
    return make_report(TagKind::ks_tag, f2, t2 - t1, std::abs(c.l) / std::abs(c.s));
}

TagReport living_partner_purity(std::string_view f1, double delta_t, const LyContext& ctx)
{
    const SlCoefficients c = sl_decompose(living_partner_state(f1, delta_t, ctx), ctx.basis());
    return make_report(TagKind::kl_tag, f1, delta_t, std::abs(c.s) / std::abs(c.l));
}

Fig1Curves fig1_curves(std::string_view f1, double t2, double kappa, std::span<const double> t1_grid, const LyContext& ctx)
{
    if (!(t2 > 0.0))
        throw DomainError("fig1_curves: t2 must be positive");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw DomainError("fig1_curves: kappa must be non-negative");
    for (double t : t1_grid)
        if (!(t >= 0.0 && t <= t2))
            throw DomainError("fig1_curves: grid point outside [0, t2]");

    const DecayChannel& c = ctx.channel(f1);
    const PhysicsParams& p = ctx.params();
    // Decay amplitude into f1 of the evolved past state with f2 = f1, up to a t1-independent factor.
    auto rate = [&](double t1) {
        const SlCoefficients k = past_state_coefficients(f1, t2, t1, ctx);
        return std::norm(k.s + c.eta() * k.l);
    };
    const double rate0 = rate(0.0);
    const double slow_width = p.gamma_s() + kappa * p.gamma_l();

    Fig1Curves out;
    out.t1_grid.assign(t1_grid.begin(), t1_grid.end());
    out.interference.reserve(t1_grid.size());
    out.decoherence.reserve(t1_grid.size());
    out.total_width.reserve(t1_grid.size());
    for (double t1 : t1_grid) {
        out.interference.push_back(rate(t1) / rate0);
        out.decoherence.push_back(std::exp(-p.gamma_s() * t1));
        out.total_width.push_back(std::exp(-slow_width * t1));
    }
    return out;
}

std::vector<double> uniform_grid(double end, std::size_t points)
{
    if (points < 2)
        throw DomainError("uniform_grid: need at least two points");
    if (!(end > 0.0) || !std::isfinite(end))
        throw DomainError("uniform_grid: end must be positive");
    std::vector<double> grid(points);
    const double step = end / static_cast<double>(points - 1);
    for (std::size_t i = 0; i + 1 < points; ++i)
        grid[i] = step * static_cast<double>(i);
    grid.back() = end;
    return grid;
}

} // namespace kaonpair

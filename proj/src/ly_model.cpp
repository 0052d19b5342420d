#include "kaonpair/ly_model.hpp"

#include "kaonpair/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace kaonpair {

namespace {

void check_ordered(double t1, double t2, const char* what)
{
    if (!(t1 >= 0.0) || !(t2 >= t1))
        throw DomainError(std::string(what) + ": requires 0 <= t1 <= t2");
}

// a^2 + b^2 - 2ab cos(theta), written without the cancellation of the cosine form.
double interference_bracket(double a, double b, double theta)
{
    const double s = std::sin(0.5 * theta);
    return (a - b) * (a - b) + 4.0 * a * b * s * s;
}

} // namespace

LyContext::LyContext(PhysicsParams params, CpParams cp, std::vector<DecayChannel> channels)
    : params_(params), cp_(cp), basis_(build_stationary_states(cp)), channels_(std::move(channels))
{
    for (std::size_t i = 0; i < channels_.size(); ++i)
        for (std::size_t j = i + 1; j < channels_.size(); ++j)
            if (channels_[i].id() == channels_[j].id())
                throw DomainError("LyContext: duplicate channel id '" + channels_[i].id() + "'");
}

const DecayChannel& LyContext::channel(std::string_view id) const
{
    const auto it = std::find_if(channels_.begin(), channels_.end(), [&](const DecayChannel& c) { return c.id() == id; });
    if (it == channels_.end())
        throw LookupError("unknown channel '" + std::string(id) + "'");
    return *it;
}

Complex ly_amplitude(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx)
{
    check_ordered(t1, t2, "ly_amplitude");
    const DecayChannel& c1 = ctx.channel(f1);
    const DecayChannel& c2 = ctx.channel(f2);
    const PhysicsParams& p = ctx.params();
    const double scale = ctx.basis().entangled_norm() / std::sqrt(2.0);
    // Grouped so that both terms are bitwise equal for f1 = f2, t1 = t2.
    const Complex sl = (c1.amp_s() * c2.amp_l()) * (p.propagator_s(t1) * p.propagator_l(t2));
    const Complex ls = (c1.amp_l() * c2.amp_s()) * (p.propagator_l(t1) * p.propagator_s(t2));
    return scale * (sl - ls);
}

double ly_intensity(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx)
{
    return std::norm(ly_amplitude(f1, t1, f2, t2, ctx));
}

double c12(std::string_view f1, std::string_view f2, const LyContext& ctx)
{
    const Complex a = ctx.channel(f1).amp_s() * ctx.channel(f2).amp_s();
    return 0.5 * ctx.basis().entangled_norm_sq * std::norm(a);
}

double ly_intensity_closed(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx)
{
    check_ordered(t1, t2, "ly_intensity_closed");
    const DecayChannel& c1 = ctx.channel(f1);
    const DecayChannel& c2 = ctx.channel(f2);
    const PhysicsParams& p = ctx.params();
    const double a = std::abs(c1.eta()) * std::exp(-0.5 * (p.gamma_l() * t1 + p.gamma_s() * t2));
    const double b = std::abs(c2.eta()) * std::exp(-0.5 * (p.gamma_s() * t1 + p.gamma_l() * t2));
    const double bracket = interference_bracket(a, b, p.delta_m() * (t2 - t1) + std::arg(c1.eta()) - std::arg(c2.eta()));
    return c12(f1, f2, ctx) * bracket;
}

double interval_density(std::string_view f1, std::string_view f2, double delta_t, const LyContext& ctx)
{
    if (!(delta_t >= 0.0))
        throw DomainError("interval_density: negative delta_t");
    const DecayChannel& c1 = ctx.channel(f1);
    const DecayChannel& c2 = ctx.channel(f2);
    const PhysicsParams& p = ctx.params();
    const double a = std::abs(c1.eta()) * std::exp(-0.5 * p.gamma_s() * delta_t);
    const double b = std::abs(c2.eta()) * std::exp(-0.5 * p.gamma_l() * delta_t);
    const double bracket = interference_bracket(a, b, p.delta_m() * delta_t + std::arg(c1.eta()) - std::arg(c2.eta()));
    return c12(f1, f2, ctx) * bracket;
}

double interval_envelope(std::string_view f1, std::string_view f2, double delta_t, const LyContext& ctx)
{
    if (!(delta_t >= 0.0))
        throw DomainError("interval_envelope: negative delta_t");
    const PhysicsParams& p = ctx.params();
    const double e1 = std::abs(ctx.channel(f1).eta());
    const double e2 = std::abs(ctx.channel(f2).eta());
    const double bracket = e1 * e1 * std::exp(-p.gamma_s() * delta_t) + e2 * e2 * std::exp(-p.gamma_l() * delta_t)
        + 2.0 * e1 * e2 * std::exp(-0.5 * p.total_width() * delta_t);
    return c12(f1, f2, ctx) * bracket;
}

KaonState first_decay_projection(std::string_view f1, double t1, double t2, const LyContext& ctx)
{
    check_ordered(t1, t2, "first_decay_projection");
    const DecayChannel& c1 = ctx.channel(f1);
    const PhysicsParams& p = ctx.params();
    const StationaryStates& b = ctx.basis();
    const double scale = b.entangled_norm() / std::sqrt(2.0);
    const Complex on_l = scale * c1.amp_s() * p.propagator_s(t1) * p.propagator_l(t2);
    const Complex on_s = scale * c1.amp_l() * p.propagator_l(t1) * p.propagator_s(t2);
    return on_l * b.k_l - on_s * b.k_s;
}

KaonState second_decay_projection(std::string_view f2, double t1, double t2, const LyContext& ctx)
{
    check_ordered(t1, t2, "second_decay_projection");
    const DecayChannel& c2 = ctx.channel(f2);
    const PhysicsParams& p = ctx.params();
    const StationaryStates& b = ctx.basis();
    const double scale = b.entangled_norm() / std::sqrt(2.0);
    const Complex on_s = scale * c2.amp_l() * p.propagator_l(t2) * p.propagator_s(t1);
    const Complex on_l = scale * c2.amp_s() * p.propagator_s(t2) * p.propagator_l(t1);
    return on_s * b.k_s - on_l * b.k_l;
}

KaonState living_partner_state(std::string_view f1, double delta_t, const LyContext& ctx)
{
    if (!(delta_t >= 0.0))
        throw DomainError("living_partner_state: negative delta_t");
    const KaonState start = k_not_f(ctx.channel(f1), ctx.basis());
    return normalize(evolve(start, delta_t, ctx.params(), ctx.basis()));
}

KaonState past_state_origin(std::string_view f2, double t2, const LyContext& ctx)
{
    if (!(t2 >= 0.0))
        throw DomainError("past_state_origin: negative t2");
    const DecayChannel& c2 = ctx.channel(f2);
    const PhysicsParams& p = ctx.params();
    const StationaryStates& b = ctx.basis();
    return (c2.eta() * p.propagator_l(t2)) * b.k_s - p.propagator_s(t2) * b.k_l;
}

SlCoefficients past_state_coefficients(std::string_view f2, double t2, double t1, const LyContext& ctx)
{
    check_ordered(t1, t2, "past_state_coefficients");
    const DecayChannel& c2 = ctx.channel(f2);
    const PhysicsParams& p = ctx.params();
    // Grouped so that the two products coincide bit for bit at t1 = t2.
    return {c2.eta() * (p.propagator_l(t2) * p.propagator_s(t1)), -(p.propagator_s(t2) * p.propagator_l(t1))};
}

KaonState past_state(std::string_view f2, double t2, double t1, const LyContext& ctx)
{
    return normalize(recompose(past_state_coefficients(f2, t2, t1, ctx), ctx.basis()));
}

} // namespace kaonpair

#include "kaonpair/th_model.hpp"

#include "kaonpair/errors.hpp"

#include <cmath>

namespace kaonpair {

double transition_probability(std::string_view f1, std::string_view f2, double delta_t, const LyContext& ctx)
{
    if (!(delta_t >= 0.0))
        throw DomainError("transition_probability: negative delta_t");
    const StationaryStates& b = ctx.basis();
    const SlCoefficients survivor = evolve(k_not_f_coefficients(ctx.channel(f1), b), delta_t, ctx.params());
    return std::norm(filter_projection(ctx.channel(f2), survivor, b));
}

double entangled_projection_probability(std::string_view f1, double t1, const LyContext& ctx)
{
    const StationaryStates& b = ctx.basis();
    const DecayChannel& c1 = ctx.channel(f1);
    const TwoKaonState filter = tensor_product(k_perp_not_f(c1, b), k_not_f(c1, b));
    return std::norm(inner(filter, evolved_entangled_state(t1, ctx.params(), b)));
}

ThBreakdown th_intensity(std::string_view f1, double t1, std::string_view f2, double t2, const LyContext& ctx)
{
    if (!(t1 >= 0.0) || !(t2 >= t1))
        throw DomainError("th_intensity: requires 0 <= t1 <= t2");
    const StationaryStates& b = ctx.basis();
    const DecayChannel& c1 = ctx.channel(f1);
    const DecayChannel& c2 = ctx.channel(f2);

    ThBreakdown out;
    out.step1_prob = 0.5 * survival_probability(t1, ctx.params());
    out.step2_amp = decay_amplitude(k_perp_not_f(c1, b), c1, b);
    out.step3_prob = transition_probability(f1, f2, t2 - t1, ctx);
    out.step4_amp = decay_amplitude(k_perp_not_f(c2, b), c2, b);
    out.total = out.step1_prob * out.step3_prob * std::norm(out.step2_amp) * std::norm(out.step4_amp);
    return out;
}

} // namespace kaonpair

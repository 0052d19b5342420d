#include "kaonpair/kaon_core.hpp"

#include "kaonpair/errors.hpp"

#include <cmath>
#include <utility>

namespace kaonpair {

namespace {

// Linear dependence threshold on |<a|b>| for unit vectors.
constexpr double kParallelTolerance = 1e-12;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

double KaonState::norm() const { return std::sqrt(norm_sq()); }

Complex inner(const KaonState& a, const KaonState& b)
{
    return std::conj(a.k0) * b.k0 + std::conj(a.k0bar) * b.k0bar;
}

KaonState normalize(const KaonState& state)
{
    if (!finite(state.k0) || !finite(state.k0bar))
        throw DomainError("normalize: non-finite state");
    const double n = state.norm();
    if (n == 0.0)
        throw DomainError("normalize: zero-norm state");
    return Complex{1.0 / n, 0.0} * state;
}

PhysicsParams::PhysicsParams(double gamma_s, double gamma_l, double delta_m)
    : gamma_s_(gamma_s), gamma_l_(gamma_l), delta_m_(delta_m)
{
    if (!std::isfinite(gamma_s) || !std::isfinite(gamma_l) || !std::isfinite(delta_m))
        throw DomainError("PhysicsParams: non-finite value");
    if (!(gamma_l > 0.0))
        throw DomainError("PhysicsParams: gamma_L must be positive");
    if (!(gamma_s > gamma_l))
        throw DomainError("PhysicsParams: gamma_S must exceed gamma_L");
}

Complex PhysicsParams::propagator_s(double t) const
{
    return std::exp(Complex{0.0, -1.0} * lambda_s() * t);
}

Complex PhysicsParams::propagator_l(double t) const
{
    return std::exp(Complex{0.0, -1.0} * lambda_l() * t);
}

CpParams::CpParams(Complex epsilon_s, Complex epsilon_l) : epsilon_s_(epsilon_s), epsilon_l_(epsilon_l)
{
    if (!finite(epsilon_s) || !finite(epsilon_l))
        throw DomainError("CpParams: non-finite value");
    if (!(std::abs(epsilon_s) < 1.0) || !(std::abs(epsilon_l) < 1.0))
        throw DomainError("CpParams: |epsilon_S| and |epsilon_L| must be below 1");
}

CpParams CpParams::from_epsilon_delta(Complex epsilon, Complex delta)
{
    return {epsilon + delta, epsilon - delta};
}

double StationaryStates::entangled_norm() const { return std::sqrt(entangled_norm_sq); }

StationaryStates build_stationary_states(const CpParams& cp)
{
    const Complex es = cp.epsilon_s();
    const Complex el = cp.epsilon_l();
    const double ns = 1.0 / std::sqrt(2.0 * (1.0 + std::norm(es)));
    const double nl = 1.0 / std::sqrt(2.0 * (1.0 + std::norm(el)));

    StationaryStates b;
    b.k_s = {ns * (1.0 + es), ns * (1.0 - es)};
    b.k_l = {nl * (1.0 + el), -nl * (1.0 - el)};
    b.overlap = inner(b.k_s, b.k_l);
    const double gap = 1.0 - std::norm(b.overlap);
    if (!(gap > kParallelTolerance))
        throw DegenerateBasisError("build_stationary_states: K_S and K_L are parallel");
    b.entangled_norm_sq = 1.0 / gap;
    return b;
}

SlCoefficients sl_decompose(const KaonState& state, const StationaryStates& basis)
{
    const KaonState& s = basis.k_s;
    const KaonState& l = basis.k_l;
    const Complex det = s.k0 * l.k0bar - l.k0 * s.k0bar;
    if (det == Complex{})
        throw DegenerateBasisError("sl_decompose: singular stationary basis");
    return {(state.k0 * l.k0bar - l.k0 * state.k0bar) / det, (s.k0 * state.k0bar - state.k0 * s.k0bar) / det};
}

KaonState recompose(const SlCoefficients& c, const StationaryStates& basis)
{
    return c.s * basis.k_s + c.l * basis.k_l;
}

KaonState evolve(const KaonState& state, double t, const PhysicsParams& params, const StationaryStates& basis)
{
    if (!(t >= 0.0))
        throw DomainError("evolve: negative or NaN time");
    if (t == 0.0)
        return state;
    const SlCoefficients c = sl_decompose(state, basis);
    return recompose({c.s * params.propagator_s(t), c.l * params.propagator_l(t)}, basis);
}

SlCoefficients evolve(const SlCoefficients& c, double t, const PhysicsParams& params)
{
    if (!(t >= 0.0))
        throw DomainError("evolve: negative or NaN time");
    return {c.s * params.propagator_s(t), c.l * params.propagator_l(t)};
}

DecayChannel::DecayChannel(std::string id, Complex eta, Complex amp_s)
    : id_(std::move(id)), eta_(eta), amp_s_(amp_s)
{
    if (id_.empty())
        throw DomainError("DecayChannel: empty id");
    if (!finite(eta) || !finite(amp_s))
        throw DomainError("DecayChannel '" + id_ + "': non-finite amplitude");
    if (amp_s == Complex{})
        throw DomainError("DecayChannel '" + id_ + "': K_S amplitude must be non-zero");
}

Complex decay_amplitude(const KaonState& state, const DecayChannel& f, const StationaryStates& basis)
{
    const SlCoefficients c = sl_decompose(state, basis);
    return c.s * f.amp_s() + c.l * f.amp_l();
}

KaonState k_not_f(const DecayChannel& f, const StationaryStates& basis)
{
    const KaonState raw = basis.k_l - f.eta() * basis.k_s;
    if (raw.norm() == 0.0)
        throw DegenerateBasisError("k_not_f: K_L - eta K_S vanishes for channel '" + f.id() + "'");
    return normalize(raw);
}

SlCoefficients k_not_f_coefficients(const DecayChannel& f, const StationaryStates& basis)
{
    const double n = (basis.k_l - f.eta() * basis.k_s).norm();
    if (n == 0.0)
        throw DegenerateBasisError("k_not_f: K_L - eta K_S vanishes for channel '" + f.id() + "'");
    const Complex inv{1.0 / n, 0.0};
    return {-(f.eta() * inv), inv};
}

KaonState k_perp_not_f(const DecayChannel& f, const StationaryStates& basis)
{
    const KaonState v = k_not_f(f, basis);
    KaonState perp{-std::conj(v.k0bar), std::conj(v.k0)};
    // Rotate the global phase onto the first non-vanishing component.
    const Complex lead = std::abs(perp.k0) > 0.0 ? perp.k0 : perp.k0bar;
    const Complex phase = std::conj(lead) / std::abs(lead);
    perp = phase * perp;
    if (std::abs(perp.k0) > 0.0)
        perp.k0 = Complex{std::abs(perp.k0), 0.0};
    else
        perp.k0bar = Complex{std::abs(perp.k0bar), 0.0};
    return perp;
}

Complex filter_projection(const DecayChannel& f, const SlCoefficients& psi, const StationaryStates& basis)
{
    const KaonState perp = k_perp_not_f(f, basis);
    const Complex eta = f.eta();
    // Take the better conditioned of the two overlaps and derive the other.
    const Complex on_s = std::abs(eta) <= 1.0 ? inner(perp, basis.k_s) : inner(perp, basis.k_l) / eta;
    return on_s * (psi.s + eta * psi.l);
}

double survival_probability(double t, const PhysicsParams& params)
{
    if (!(t >= 0.0))
        throw DomainError("survival_probability: negative or NaN time");
    return std::exp(-params.total_width() * t);
}

TwoKaonState tensor_product(const KaonState& first, const KaonState& second)
{
    return {first.k0 * second.k0, first.k0 * second.k0bar, first.k0bar * second.k0, first.k0bar * second.k0bar};
}

TwoKaonState antisymmetric_pair(const KaonState& first, const KaonState& second)
{
    const TwoKaonState ab = tensor_product(first, second);
    const TwoKaonState ba = tensor_product(second, first);
    TwoKaonState out;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = ab[i] - ba[i];
    return out;
}

Complex inner(const TwoKaonState& a, const TwoKaonState& b)
{
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm_sq(const TwoKaonState& s) { return inner(s, s).real(); }

TwoKaonState flavor_singlet()
{
    const double r = 1.0 / std::sqrt(2.0);
    TwoKaonState out = antisymmetric_pair(kK0, kK0bar);
    for (auto& c : out)
        c *= r;
    return out;
}

TwoKaonState evolved_entangled_state(double t, const PhysicsParams& params, const StationaryStates& basis)
{
    const KaonState s = evolve(basis.k_s, t, params, basis);
    const KaonState l = evolve(basis.k_l, t, params, basis);
    TwoKaonState out = antisymmetric_pair(s, l);
    const double scale = basis.entangled_norm() / std::sqrt(2.0);
    for (auto& c : out)
        c *= scale;
    return out;
}

double basis_independence_check(const KaonState& alpha, const KaonState& beta)
{
    const KaonState a = normalize(alpha);
    const KaonState b = normalize(beta);
    const double gap = 1.0 - std::norm(inner(a, b));
    if (!(gap > kParallelTolerance))
        throw DegenerateBasisError("basis_independence_check: states are parallel");
    TwoKaonState pair = antisymmetric_pair(a, b);
    const double scale = 1.0 / std::sqrt(2.0 * gap);
    for (auto& c : pair)
        c *= scale;
    return std::norm(inner(flavor_singlet(), pair));
}

} // namespace kaonpair

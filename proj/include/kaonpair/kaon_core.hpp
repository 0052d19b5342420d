#pragma once

// Single neutral-kaon state algebra in the flavour basis (K0, K0bar).
//
// Conventions: proper times are in units of the K_S lifetime, widths and the
// mass difference in units of 1/tau_S (hbar = 1). The common phase of the two
// effective-Hamiltonian eigenvalues is dropped, so lambda_S = -i Gamma_S / 2
// and lambda_L = delta_m - i Gamma_L / 2.

#include <array>
#include <complex>
#include <string>

namespace kaonpair {

using Complex = std::complex<double>;

/// Amplitudes of a single-kaon state on the orthonormal flavour basis.
struct KaonState {
    Complex k0{};
    Complex k0bar{};

    double norm_sq() const { return std::norm(k0) + std::norm(k0bar); }
    double norm() const;

    friend KaonState operator+(const KaonState& a, const KaonState& b) { return {a.k0 + b.k0, a.k0bar + b.k0bar}; }
    friend KaonState operator-(const KaonState& a, const KaonState& b) { return {a.k0 - b.k0, a.k0bar - b.k0bar}; }
    friend KaonState operator*(Complex c, const KaonState& s) { return {c * s.k0, c * s.k0bar}; }
    friend bool operator==(const KaonState&, const KaonState&) = default;
};

inline const KaonState kK0{Complex{1.0, 0.0}, Complex{0.0, 0.0}};
inline const KaonState kK0bar{Complex{0.0, 0.0}, Complex{1.0, 0.0}};

/// <a|b>, conjugate-linear in a.
Complex inner(const KaonState& a, const KaonState& b);

/// Unit-norm copy of the state, scaled by a real positive factor. Throws DomainError on zero norm.
KaonState normalize(const KaonState& state);

/// Widths and mass difference of the stationary states.
class PhysicsParams {
public:
    /// Requires gamma_s > gamma_l > 0 and a finite delta_m (m_L - m_S).
    PhysicsParams(double gamma_s, double gamma_l, double delta_m);

    double gamma_s() const { return gamma_s_; }
    double gamma_l() const { return gamma_l_; }
    double delta_m() const { return delta_m_; }
    double total_width() const { return gamma_s_ + gamma_l_; }
    double width_difference() const { return gamma_s_ - gamma_l_; }

    Complex lambda_s() const { return {0.0, -0.5 * gamma_s_}; }
    Complex lambda_l() const { return {delta_m_, -0.5 * gamma_l_}; }

    /// exp(-i lambda_S t) and exp(-i lambda_L t).
    Complex propagator_s(double t) const;
    Complex propagator_l(double t) const;

private:
    double gamma_s_;
    double gamma_l_;
    double delta_m_;
};

/// CP impurities of the stationary states. epsilon = (eS + eL)/2, delta = (eS - eL)/2.
class CpParams {
public:
    /// Requires |epsilon_s| < 1 and |epsilon_l| < 1.
    CpParams(Complex epsilon_s, Complex epsilon_l);
    static CpParams from_epsilon_delta(Complex epsilon, Complex delta);
    static CpParams conserving() { return {Complex{}, Complex{}}; }

    Complex epsilon_s() const { return epsilon_s_; }
    Complex epsilon_l() const { return epsilon_l_; }
    Complex epsilon() const { return 0.5 * (epsilon_s_ + epsilon_l_); }
    Complex delta() const { return 0.5 * (epsilon_s_ - epsilon_l_); }

private:
    Complex epsilon_s_;
    Complex epsilon_l_;
};

/// K_S, K_L in the flavour basis, their overlap and the entangled-state normalisation |N|^2.
struct StationaryStates {
    KaonState k_s;
    KaonState k_l;
    Complex overlap;          // <K_S|K_L>
    double entangled_norm_sq; // (1 - |<K_S|K_L>|^2)^-1

    /// N taken real and positive.
    double entangled_norm() const;
};

/// Throws DegenerateBasisError when K_S and K_L are (numerically) parallel.
StationaryStates build_stationary_states(const CpParams& cp);

/// Coefficients of state = s * K_S + l * K_L.
struct SlCoefficients {
    Complex s;
    Complex l;
};

/// Expansion on the non-orthogonal (K_S, K_L) pair by a 2x2 linear solve.
SlCoefficients sl_decompose(const KaonState& state, const StationaryStates& basis);
KaonState recompose(const SlCoefficients& c, const StationaryStates& basis);

/// Free evolution over proper time t >= 0. Throws DomainError for negative t.
KaonState evolve(const KaonState& state, double t, const PhysicsParams& params, const StationaryStates& basis);

/// Evolution in stationary coordinates: s *= e^{-i lambda_S t}, l *= e^{-i lambda_L t}.
SlCoefficients evolve(const SlCoefficients& c, double t, const PhysicsParams& params);

/// A decay channel f, characterised by eta_f = <f|T|K_L>/<f|T|K_S> and the reference amplitude <f|T|K_S>.
class DecayChannel {
public:
    /// Requires amp_s != 0 and finite eta.
    DecayChannel(std::string id, Complex eta, Complex amp_s);

    const std::string& id() const { return id_; }
    Complex eta() const { return eta_; }
    Complex amp_s() const { return amp_s_; }
    Complex amp_l() const { return eta_ * amp_s_; }

private:
    std::string id_;
    Complex eta_;
    Complex amp_s_;
};

/// <f|T|state>, linear in the state.
Complex decay_amplitude(const KaonState& state, const DecayChannel& f, const StationaryStates& basis);

/// The unit state N [K_L - eta_f K_S] (N real positive) with zero amplitude into f.
KaonState k_not_f(const DecayChannel& f, const StationaryStates& basis);

/// Stationary coefficients of k_not_f(f): N (-eta_f, 1).
SlCoefficients k_not_f_coefficients(const DecayChannel& f, const StationaryStates& basis);

/// Unit state orthogonal to k_not_f(f); phase fixed so the K0 component is real and
/// non-negative (the K0bar component is made real positive when the K0 component vanishes).
KaonState k_perp_not_f(const DecayChannel& f, const StationaryStates& basis);

/// <k_perp_not_f(f)|psi> for psi = c.s K_S + c.l K_L. Uses <Kperp|K_L> = eta_f <Kperp|K_S>, which
/// avoids the cancellation of projecting a nearly filtered state in the flavour basis.
Complex filter_projection(const DecayChannel& f, const SlCoefficients& psi, const StationaryStates& basis);

/// exp(-Gamma t) for the C = -1 pair. Throws DomainError for negative t.
double survival_probability(double t, const PhysicsParams& params);

/// Two-kaon amplitudes; component [2*i + j] multiplies |i>_1 |j>_2 with i, j in {K0, K0bar}.
using TwoKaonState = std::array<Complex, 4>;

TwoKaonState tensor_product(const KaonState& first, const KaonState& second);
/// first (x) second - second (x) first.
TwoKaonState antisymmetric_pair(const KaonState& first, const KaonState& second);
Complex inner(const TwoKaonState& a, const TwoKaonState& b);
double norm_sq(const TwoKaonState& s);

/// (|K0>|K0bar> - |K0bar>|K0>) / sqrt(2).
TwoKaonState flavor_singlet();

/// N/sqrt(2) {K_S(t) K_L(t) - K_L(t) K_S(t)} with both partners evolved independently.
TwoKaonState evolved_entangled_state(double t, const PhysicsParams& params, const StationaryStates& basis);

/// |<singlet| N_ab/sqrt(2) {a b - b a}>|^2 for normalised a, b; equals 1 for any independent pair.
/// Throws DegenerateBasisError for parallel inputs.
double basis_independence_check(const KaonState& alpha, const KaonState& beta);

} // namespace kaonpair

#pragma once

// Shared helpers for the test binaries: seeded parameter draws over the
// sweep ranges used throughout, and a flavour-basis amplitude oracle that
// shares no code path with the library's intensity routines.

#include "kaonpair/kaon_core.hpp"
#include "kaonpair/ly_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

namespace kaonpair::testing {

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double state_distance(const KaonState& a, const KaonState& b)
{
    return std::sqrt(std::norm(a.k0 - b.k0) + std::norm(a.k0bar - b.k0bar));
}

/// Distance after removing the relative global phase; both inputs must be unit vectors.
inline double ray_distance(const KaonState& a, const KaonState& b)
{
    const Complex ov = inner(a, b);
    if (std::abs(ov) == 0.0)
        return state_distance(a, b);
    return state_distance(Complex{std::abs(ov), 0.0} / ov * b, a);
}

struct Draw {
    LyContext ctx;
    std::string f1;
    std::string f2;
    double t1;
    double t2;
};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    double phase() { return uniform(0.0, 2.0 * std::numbers::pi); }

    /// Uniform over the disk |z| <= r.
    Complex disk(double r) { return std::polar(r * std::sqrt(uniform()), phase()); }

    KaonState state() { return {Complex{uniform(-1, 1), uniform(-1, 1)}, Complex{uniform(-1, 1), uniform(-1, 1)}}; }

    CpParams cp(double r = 0.2) { return {disk(r), disk(r)}; }

    PhysicsParams physics() { return {1.0, uniform(1e-3, 0.9), uniform(-2.0, 2.0)}; }

    DecayChannel channel(const std::string& id)
    {
        return {id, std::polar(log_uniform(1e-4, 10.0), phase()), std::polar(uniform(0.1, 2.0), phase())};
    }

    /// |eps| <= 0.2, |eta| log-uniform on [1e-4, 10], t1 <= t2 <= 30; f1 and f2 may coincide.
    Draw draw()
    {
        LyContext ctx(physics(), cp(), {channel("a"), channel("b")});
        const std::string f1 = uniform() < 0.5 ? "a" : "b";
        const std::string f2 = uniform() < 0.5 ? "a" : "b";
        const double t2 = uniform(0.0, 30.0);
        const double t1 = uniform(0.0, t2);
        return {std::move(ctx), f1, f2, t1, t2};
    }

private:
    std::mt19937_64 rng_;
};

/// e^{-Gamma t1} times the cosine-free envelope of G: the size the intensity would have without interference.
inline double intensity_scale(const Draw& d)
{
    return std::exp(-d.ctx.params().total_width() * d.t1) * interval_envelope(d.f1, d.f2, d.t2 - d.t1, d.ctx);
}

/// <f1 f2|T|i_{t1,t2}> built on the flavour-basis tensor: each decay is a linear functional on
/// (K0, K0bar) fixed by its values amp_s on K_S and amp_l on K_L.
inline Complex tensor_amplitude(const Draw& d)
{
    const StationaryStates& b = d.ctx.basis();
    const PhysicsParams& p = d.ctx.params();
    const auto functional = [&](const DecayChannel& f) {
        // Solve x0 s0 + x1 s1 = amp_s, x0 l0 + x1 l1 = amp_l.
        const Complex det = b.k_s.k0 * b.k_l.k0bar - b.k_s.k0bar * b.k_l.k0;
        return std::array<Complex, 2>{(f.amp_s() * b.k_l.k0bar - f.amp_l() * b.k_s.k0bar) / det,
                                      (f.amp_l() * b.k_s.k0 - f.amp_s() * b.k_l.k0) / det};
    };
    const auto x = functional(d.ctx.channel(d.f1));
    const auto y = functional(d.ctx.channel(d.f2));
    const Complex i{0.0, 1.0};
    const Complex s1 = std::exp(-i * p.lambda_s() * d.t1);
    const Complex l1 = std::exp(-i * p.lambda_l() * d.t1);
    const Complex s2 = std::exp(-i * p.lambda_s() * d.t2);
    const Complex l2 = std::exp(-i * p.lambda_l() * d.t2);
    const KaonState a1 = s1 * b.k_s;
    const KaonState b1 = l1 * b.k_l;
    const KaonState a2 = s2 * b.k_s;
    const KaonState b2 = l2 * b.k_l;
    const std::array<Complex, 2> ks1{a1.k0, a1.k0bar};
    const std::array<Complex, 2> kl1{b1.k0, b1.k0bar};
    const std::array<Complex, 2> ks2{a2.k0, a2.k0bar};
    const std::array<Complex, 2> kl2{b2.k0, b2.k0bar};
    Complex sum{};
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            sum += x[m] * y[n] * (ks1[m] * kl2[n] - kl1[m] * ks2[n]);
    const double norm = 1.0 / std::sqrt(1.0 - std::norm(inner(b.k_s, b.k_l)));
    return norm / std::sqrt(2.0) * sum;
}

} // namespace kaonpair::testing

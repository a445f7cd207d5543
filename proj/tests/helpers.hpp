// helpers.hpp — shared test utilities: parameter draws and the independent
// drift-ODE integrator used as an oracle for the propagator functions

#pragma once

#include <array>
#include <random>

#include "oscnet/params.hpp"

namespace oscnet::test {

inline SpectralModel random_spectral(std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> eps(0.01, 1.0);
    switch (kind(rng)) {
        case 0: return SpectralModel::markovian();
        case 1: return SpectralModel::lorentzian(eps(rng), eps(rng));
        default: return SpectralModel::wide_lorentzian(eps(rng));
    }
}

// Random config respecting the coupling guard lambda >= 10 Gamma.
// identical = force both reservoirs to share Gamma and spectral model.
inline SystemConfig random_config(std::mt19937& rng, bool identical, bool dissipative = true) {
    std::uniform_real_distribution<double> lam(0.05, 2.0);
    std::uniform_real_distribution<double> frac(0.005, 0.1); // Gamma as fraction of lambda
    SystemConfig cfg;
    cfg.lambda = lam(rng);
    if (dissipative) {
        cfg.gamma_scale_1 = frac(rng) * cfg.lambda;
        cfg.gamma_scale_2 = identical ? cfg.gamma_scale_1 : frac(rng) * cfg.lambda;
    }
    cfg.spectral_1 = random_spectral(rng);
    cfg.spectral_2 = identical ? cfg.spectral_1 : random_spectral(rng);
    return cfg;
}

inline cplx random_amplitude(std::mt19937& rng, double max_mod = 1.2) {
    std::uniform_real_distribution<double> mod(0.1, max_mod);
    std::uniform_real_distribution<double> arg(0.0, 2.0 * M_PI);
    return std::polar(mod(rng), arg(rng));
}

// RK4 on the linear drift system d(alpha)/dt = E alpha + B; returns the pair
// (alpha1, alpha2). Independent of the closed-form propagator path.
inline std::array<cplx, 2> integrate_drift(const DerivedCoefficients& c,
                                           std::array<cplx, 2> alpha, double t, int steps) {
    auto rhs = [&](const std::array<cplx, 2>& a) {
        return std::array<cplx, 2>{c.B_1 + a[0] * c.E_plus_1 + a[1] * c.E_minus_1,
                                   c.B_2 + a[1] * c.E_plus_2 + a[0] * c.E_minus_2};
    };
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = rhs(alpha);
        const auto k2 = rhs({alpha[0] + 0.5 * h * k1[0], alpha[1] + 0.5 * h * k1[1]});
        const auto k3 = rhs({alpha[0] + 0.5 * h * k2[0], alpha[1] + 0.5 * h * k2[1]});
        const auto k4 = rhs({alpha[0] + h * k3[0], alpha[1] + h * k3[1]});
        alpha[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        alpha[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    return alpha;
}

} // namespace oscnet::test

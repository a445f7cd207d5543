#include "oscnet/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscnet {

void SpectralModel::validate() const {
    if (kind == SpectralKind::MarkovianWhite) return;
    auto check = [](double eps, const char* which) {
        if (!(eps > 0.0) || eps > 1.0) {
            std::ostringstream msg;
            msg << "spectral model: " << which << " = " << eps << " outside (0, 1]";
            throw ConfigError(msg.str());
        }
    };
    if (kind == SpectralKind::Lorentzian) check(eps_plus, "eps_plus");
    check(eps_minus, "eps_minus");
}

std::string SpectralModel::name() const {
    switch (kind) {
        case SpectralKind::MarkovianWhite: return "markovian";
        case SpectralKind::Lorentzian: return "lorentzian";
        case SpectralKind::WideLorentzian: return "wide_lorentzian";
    }
    return "unknown";
}

double SystemConfig::frame_frequency(int mode) const {
    const double base = (mode == 1) ? omega10 : omega20;
    double shift = 1.0 + lambda * lambda / (4.0 * omega10 * omega20);
    if (mode == 2) shift += drive_amplitude / omega20;
    return base * shift;
}

double SystemConfig::required_drive_amplitude() const {
    return (omega10 - omega20) * (1.0 + lambda * lambda / (4.0 * omega10 * omega20));
}

void SystemConfig::validate(bool enforce_coupling_guard) const {
    if (!(omega10 > 0.0)) throw ConfigError("omega10 must be > 0");
    if (!(omega20 > 0.0)) throw ConfigError("omega20 must be > 0");
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (drive_amplitude < 0.0) throw ConfigError("F must be >= 0");
    if (gamma_scale_1 < 0.0 || gamma_scale_2 < 0.0) throw ConfigError("Gamma must be >= 0");
    spectral_1.validate();
    spectral_2.validate();

    const double gmax = std::max(gamma_scale_1, gamma_scale_2);
    if (enforce_coupling_guard && gmax > 0.0 && lambda < 10.0 * gmax) {
        std::ostringstream msg;
        msg << "coupling guard violated: lambda = " << lambda << " < 10*max(Gamma1,Gamma2) = "
            << 10.0 * gmax << " (the solution assumes lambda >> Gamma)";
        throw ConfigError(msg.str());
    }

    // A single rotating-frame frequency Omega must exist for both modes.
    if (drive_amplitude == 0.0) {
        if (std::abs(omega10 - omega20) > 1e-12 * std::max(omega10, omega20))
            throw ConfigError("with F = 0 the bare frequencies must coincide (omega10 == omega20)");
    } else {
        const double required = required_drive_amplitude();
        if (std::abs(drive_amplitude - required) > 1e-6 * std::max({std::abs(required), omega20, 1e-300})) {
            std::ostringstream msg;
            msg << "drive amplitude F = " << drive_amplitude
                << " does not match the frame constraint F = (omega10-omega20)*(1+lambda^2/(4 omega10 omega20)) = "
                << required;
            throw ConfigError(msg.str());
        }
    }
}

std::pair<double, double> normal_mode_frequencies(const SystemConfig& config) {
    const double omega_frame = config.frame_frequency(1);
    return {omega_frame + config.lambda, omega_frame - config.lambda};
}

namespace {

// Strong-coupling rate split for one reservoir. The minus mode of the white
// model sits at zero frequency when F = 0, where the half-range integral
// halves the rate; with F != 0 the minus mode sits at a regular point.
std::pair<double, double> split_rates(const SpectralModel& model, double gamma_scale, bool driven) {
    switch (model.kind) {
        case SpectralKind::MarkovianWhite: {
            const double plus = 0.5 * gamma_scale;
            const double minus = driven ? 0.5 * gamma_scale : 0.25 * gamma_scale;
            return {plus, minus};
        }
        case SpectralKind::Lorentzian:
            return {0.5 * model.eps_plus * gamma_scale, 0.5 * model.eps_minus * gamma_scale};
        case SpectralKind::WideLorentzian:
            return {0.5 * gamma_scale, 0.5 * model.eps_minus * gamma_scale};
    }
    return {0.0, 0.0};
}

} // namespace

DampingRates evaluate_rates(const SystemConfig& config) {
    config.spectral_1.validate();
    config.spectral_2.validate();
    // Exact comparison: the driven and undriven splits are distinct formulas,
    // not ends of an interpolation.
    const bool driven = config.drive_amplitude != 0.0;

    DampingRates rates;
    std::tie(rates.gamma_plus_1, rates.gamma_minus_1) =
        split_rates(config.spectral_1, config.gamma_scale_1, driven);
    std::tie(rates.gamma_plus_2, rates.gamma_minus_2) =
        split_rates(config.spectral_2, config.gamma_scale_2, driven);
    rates.gamma_at_drive_1 = config.gamma_at_drive_1.value_or(0.5 * config.gamma_scale_1);
    rates.gamma_at_drive_2 = config.gamma_at_drive_2.value_or(0.5 * config.gamma_scale_2);
    return rates;
}

DerivedCoefficients derive_coefficients(const SystemConfig& config, const DampingRates& rates) {
    DerivedCoefficients c;
    c.lambda = config.lambda;
    c.drive_amplitude = config.drive_amplitude;

    const double omega_frame = config.frame_frequency(1);
    c.Omega = omega_frame - config.drive_frequency;
    c.omega_plus = omega_frame + config.lambda;
    c.omega_minus = omega_frame - config.lambda;

    const double gp1 = rates.gamma_plus_1, gm1 = rates.gamma_minus_1;
    const double gp2 = rates.gamma_plus_2, gm2 = rates.gamma_minus_2;

    c.Lambda = cplx(0.25 * (gp1 + gp2 + gm1 + gm2), c.Omega);
    c.Delta = 0.25 * (gp1 - gp2 + gm1 - gm2);
    c.Phi = 0.25 * (gp1 + gp2 - gm1 - gm2);
    c.Theta = 0.25 * (gp1 - gp2 - gm1 + gm2);
    c.Pi_1 = 0.5 * (gp1 + gm1);
    c.Pi_2 = 0.5 * (gp2 + gm2);

    c.E_plus_1 = cplx(0.5 * (gp1 + gm1), c.Omega);
    c.E_plus_2 = cplx(0.5 * (gp2 + gm2), c.Omega);
    c.E_minus_1 = cplx(0.5 * (gp1 - gm1), config.lambda);
    c.E_minus_2 = cplx(0.5 * (gp2 - gm2), config.lambda);

    const double F = config.drive_amplitude;
    if (F != 0.0) {
        const double det_freq = c.Omega * c.Omega - config.lambda * config.lambda;
        if (std::abs(det_freq) <= 1e-9 * std::max(c.Omega * c.Omega, config.lambda * config.lambda))
            throw DegenerateDriveError("drive degenerate with a normal mode: |Omega^2 - lambda^2| ~ 0");
        const double pref = F / (2.0 * det_freq);
        // B_l = i F delta_l2 - pref * [ (Omega d_l2 - lambda d_l1)(2 gamma_l(omega) - gamma_l^- - gamma_l^+)
        //                             + (Omega d_l1 - lambda d_l2)(gamma_l^- - gamma_l^+) ]
        c.B_1 = -pref * ((-config.lambda) * (2.0 * rates.gamma_at_drive_1 - gm1 - gp1) +
                         c.Omega * (gm1 - gp1));
        c.B_2 = cplx(0.0, F) -
                pref * (c.Omega * (2.0 * rates.gamma_at_drive_2 - gm2 - gp2) +
                        (-config.lambda) * (gm2 - gp2));
        const cplx det = c.E_plus_1 * c.E_plus_2 - c.E_minus_1 * c.E_minus_2;
        c.G_1 = (c.B_2 * c.E_minus_1 - c.B_1 * c.E_plus_2) / det;
        c.G_2 = (c.B_1 * c.E_minus_2 - c.B_2 * c.E_plus_1) / det;
    } else {
        c.B_1 = c.B_2 = 0.0;
        c.G_1 = c.G_2 = 0.0;
    }
    return c;
}

DerivedCoefficients derive_coefficients(const SystemConfig& config) {
    return derive_coefficients(config, evaluate_rates(config));
}

} // namespace oscnet

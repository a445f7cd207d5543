#include "oscnet/observables.hpp"

#include <cmath>

namespace oscnet {

double recurrence_probability(const InitialSuperposition& init,
                              const JointStateSnapshot& snapshot) {
    return joint_dyad_trace_product(snapshot, initial_snapshot(init, false));
}

double swap_probability(const InitialSuperposition& init,
                        const JointStateSnapshot& snapshot) {
    return joint_dyad_trace_product(snapshot, initial_snapshot(init, true));
}

double coherence_factor_joint(StateKind kind, const DampingRates& rates, cplx alpha, double t) {
    const double a2 = std::norm(alpha);
    const double ep = std::exp(-rates.sum_plus() * t);
    const double em = std::exp(-rates.sum_minus() * t);
    switch (kind) {
        case StateKind::ProductCat:
            return std::exp(-a2 * (2.0 - ep - em));
        case StateKind::EigenMinus:
            return std::exp(-4.0 * a2 * (1.0 - em));
        case StateKind::EigenPlus:
            return std::exp(-4.0 * a2 * (1.0 - ep));
    }
    return 1.0;
}

double coherence_factor_reduced(int mode, const DampingRates& rates, double lambda,
                                cplx alpha, double t) {
    const double a2 = std::norm(alpha);
    const double phase = (mode == 1) ? 0.0 : M_PI;
    const double ep = std::exp(-rates.sum_plus() * t);
    const double em = std::exp(-rates.sum_minus() * t);
    const double emid = std::exp(-0.5 * rates.sum_all() * t);
    const double profile = 0.25 * (ep + em + 2.0 * std::cos(2.0 * lambda * t + phase) * emid);
    return std::exp(-2.0 * a2 * (1.0 - profile));
}

double coherence_factor_isolated(double gamma_scale, cplx alpha, double t) {
    return std::exp(-2.0 * std::norm(alpha) * (1.0 - std::exp(-gamma_scale * t)));
}

double decoherence_time(StateKind kind, const DampingRates& rates, cplx alpha) {
    const double a2 = std::norm(alpha);
    if (!(a2 > 0.0)) throw NoDissipationError("decoherence time requires |alpha| > 0");
    double rate = 0.0;
    switch (kind) {
        case StateKind::ProductCat: rate = a2 * rates.sum_all(); break;
        case StateKind::EigenMinus: rate = 4.0 * a2 * rates.sum_minus(); break;
        case StateKind::EigenPlus: rate = 4.0 * a2 * rates.sum_plus(); break;
    }
    if (!(rate > 0.0)) throw NoDissipationError("all damping rates vanish");
    return 1.0 / rate;
}

double decoherence_time_efold(StateKind kind, const DampingRates& rates, cplx alpha) {
    const double a2 = std::norm(alpha);
    if (!(a2 > 0.0)) throw NoDissipationError("decoherence time requires |alpha| > 0");
    // Bisection on factor(t) = floor + (1 - floor)/e, the e-fold of the gap
    // between 1 and the fully decohered level.
    double floor_level = 0.0;
    switch (kind) {
        case StateKind::ProductCat: floor_level = std::exp(-2.0 * a2); break;
        case StateKind::EigenMinus:
        case StateKind::EigenPlus: floor_level = std::exp(-4.0 * a2); break;
    }
    const double target = floor_level + (1.0 - floor_level) / M_E;
    const double scale = decoherence_time(kind, rates, alpha);
    double lo = 0.0, hi = scale;
    while (coherence_factor_joint(kind, rates, alpha, hi) > target) {
        hi *= 2.0;
        if (hi > 1e12 * scale) throw NoDissipationError("coherence factor never reaches target");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (coherence_factor_joint(kind, rates, alpha, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

DecoherenceReport decoherence_report(const DampingRates& rates, cplx alpha,
                                     double gamma_scale_1, double gamma_scale_2) {
    const double a2 = std::norm(alpha);
    if (!(a2 > 0.0)) throw NoDissipationError("decoherence report requires |alpha| > 0");
    if (!(rates.sum_all() > 0.0)) throw NoDissipationError("all damping rates vanish");

    DecoherenceReport report;
    report.tau_D = decoherence_time(StateKind::ProductCat, rates, alpha);
    // Benchmark: isolated mode 1 (relaxation time 1/Gamma_1); for identical
    // oscillators this is the common Gamma.
    const double gamma_ref = gamma_scale_1 > 0.0 ? gamma_scale_1 : gamma_scale_2;
    report.tau_D_reference = 1.0 / (2.0 * a2 * gamma_ref);
    report.ratio = report.tau_D / report.tau_D_reference;

    const double cross = rates.sum_cross();
    if (std::abs(cross) < 1e-15 * rates.sum_all()) {
        report.tau_C_unbounded = true;
    } else {
        report.tau_C = 1.0 / (5.0 * std::abs(alpha) * cross);
        report.tau_ratio = *report.tau_C / report.tau_D;
    }
    return report;
}

double find_state_probability(const ReducedStateSnapshot& reduced,
                              const CoherentSuperposition& target) {
    cplx prob = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            prob += reduced.coeffs(m, n) * target.bra_coherent(reduced.labels[m]) *
                    std::conj(target.bra_coherent(reduced.labels[n]));
    return prob.real();
}

EntropyReport linear_entropies(const JointStateSnapshot& snapshot) {
    EntropyReport report;
    report.S12 = 1.0 - joint_purity(snapshot);
    report.S1 = 1.0 - reduced_purity(reduce_to_mode(snapshot, 1));
    report.S2 = 1.0 - reduced_purity(reduce_to_mode(snapshot, 2));
    report.excess = report.S1 + report.S2 - report.S12;
    return report;
}

} // namespace oscnet

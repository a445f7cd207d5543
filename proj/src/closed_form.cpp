#include "oscnet/closed_form.hpp"

#include <cmath>

namespace oscnet {

InitialSuperposition InitialSuperposition::make(cplx bI1, cplx bI2, cplx bII1, cplx bII2, int sign) {
    InitialSuperposition init;
    init.beta_I_1 = bI1;
    init.beta_I_2 = bI2;
    init.beta_II_1 = bII1;
    init.beta_II_2 = bII2;
    init.relative_sign = sign >= 0 ? +1 : -1;
    const cplx overlap =
        coherent_overlap(bII1, bI1) * coherent_overlap(bII2, bI2);
    const double denom = 2.0 + 2.0 * init.relative_sign * overlap.real();
    if (!(denom > 1e-300))
        throw std::invalid_argument("initial superposition has zero norm");
    init.norm = 1.0 / std::sqrt(denom);
    return init;
}

InitialSuperposition InitialSuperposition::product_cat(cplx alpha, cplx eta, int sign) {
    return make(alpha, eta, -alpha, eta, sign);
}

InitialSuperposition InitialSuperposition::eigen_minus(cplx alpha, int sign) {
    return make(alpha, -alpha, -alpha, alpha, sign);
}

InitialSuperposition InitialSuperposition::eigen_plus(cplx alpha, int sign) {
    return make(alpha, alpha, -alpha, -alpha, sign);
}

PropagatorSample propagator(const DerivedCoefficients& coeffs, double t) {
    if (coeffs.lambda == 0.0)
        throw DegenerateCouplingError("propagator requires lambda > 0 (Delta/lambda undefined)");

    const double lam_t = coeffs.lambda * t;
    const double c = std::cos(lam_t), s = std::sin(lam_t);
    const double ch = std::cosh(coeffs.Phi * t), sh = std::sinh(coeffs.Phi * t);
    const double d = coeffs.Delta / coeffs.lambda;
    const double th = coeffs.Theta / coeffs.lambda;

    PropagatorSample p;
    p.t = t;
    p.W_plus = cplx(ch * (c + d * s), sh * (s - d * c));
    p.W_minus = cplx(ch * (c - d * s), sh * (s + d * c));
    p.Z_plus = cplx(sh * c + th * ch * s, ch * s - th * sh * c);
    p.Z_minus = cplx(sh * c - th * ch * s, ch * s + th * sh * c);
    p.exp_neg_Lambda_t = std::exp(-coeffs.Lambda * t);
    return p;
}

std::pair<cplx, cplx> characteristic_trajectories(const DerivedCoefficients& coeffs,
                                                  cplx alpha1_0, cplx alpha2_0, double t) {
    const PropagatorSample p = propagator(coeffs, t);
    const cplx growth = std::exp(coeffs.Lambda * t);
    const cplx a1 = growth * ((alpha1_0 - coeffs.G_1) * p.W_plus +
                              (alpha2_0 - coeffs.G_2) * p.Z_plus) + coeffs.G_1;
    const cplx a2 = growth * ((alpha2_0 - coeffs.G_2) * p.W_minus +
                              (alpha1_0 - coeffs.G_1) * p.Z_minus) + coeffs.G_2;
    return {a1, a2};
}

// Sign conventions, resolved numerically against the drift ODE and the Fock
// oracle: the characteristic map (W+, +Z+ / W-, +Z-) integrates the drift
// system forward, which is the time-REVERSED mean-field flow, so it grows as
// e^{+Lambda t}. The physical labels evolve by the inverse of that map. Its
// matrix has unit determinant (exactly so for identical oscillators), giving
// the adjugate pattern (W-, -Z+) for sigma and (W+, -Z-) for zeta together
// with e^{-Lambda t} — precisely the printed label formulas. The mean-field
// check lives in the oracle tests.
JointStateSnapshot evolve_joint_state(const InitialSuperposition& init,
                                      const DerivedCoefficients& coeffs, double t) {
    JointStateSnapshot snap;
    snap.t = t;
    snap.init = init;
    snap.prop = propagator(coeffs, t);
    const PropagatorSample& p = snap.prop;

    const cplx eL = p.exp_neg_Lambda_t;                   // e^{-Lambda t}
    const double e2 = std::exp(-2.0 * coeffs.Lambda.real() * t);
    const cplx G1 = coeffs.G_1, G2 = coeffs.G_2;

    for (int m = 0; m < 2; ++m) {
        const cplx b1 = init.beta(m, 1), b2 = init.beta(m, 2);
        snap.sigma[m] = eL * ((b1 - G1) * p.W_minus - (b2 - G2) * p.Z_plus) + G1;
        snap.zeta[m] = eL * ((b2 - G2) * p.W_plus - (b1 - G1) * p.Z_minus) + G2;
    }

    // Affine offsets of the label maps, shared by all dyads.
    const cplx offset_zeta = eL * (G1 * p.Z_minus - G2 * p.W_plus) + G2;
    const cplx offset_sigma = eL * (G2 * p.Z_plus - G1 * p.W_minus) + G1;

    const double p1 = 1.0 - e2 * (std::norm(p.W_minus) + std::norm(p.Z_minus));
    const double p2 = 1.0 - e2 * (std::norm(p.W_plus) + std::norm(p.Z_plus));

    const double n2 = init.norm * init.norm;
    const double sign = init.relative_sign;

    for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) {
            const cplx bm1 = init.beta(m, 1), bm2 = init.beta(m, 2);
            const cplx bn1 = init.beta(n, 1), bn2 = init.beta(n, 2);
            const cplx d1 = bm1 - bn1, d2 = bm2 - bn2;

            const double th1 = std::imag(
                std::conj(eL) * (std::conj(p.W_plus) * std::conj(d2) -
                                 std::conj(p.Z_minus) * std::conj(d1)) * offset_zeta);
            const double th3 = std::imag(
                std::conj(eL) * (std::conj(p.W_minus) * std::conj(d1) -
                                 std::conj(p.Z_plus) * std::conj(d2)) * offset_sigma);
            // The printed 2*theta left-hand sides: halve the right-hand sides.
            const cplx th2 = 0.5 * e2 *
                (p.W_plus * std::conj(p.Z_minus) *
                     (std::conj(bn1) * d2 - std::conj(d1) * bm2) -
                 std::conj(p.W_plus) * p.Z_minus *
                     (bm1 * std::conj(d2) - d1 * std::conj(bn2)));
            const cplx th4 = 0.5 * e2 *
                (p.W_minus * std::conj(p.Z_plus) *
                     (d1 * std::conj(bn2) - bm1 * std::conj(d2)) -
                 std::conj(p.W_minus) * p.Z_plus *
                     (std::conj(d1) * bm2 - std::conj(bn1) * d2));

            snap.theta1(m, n) = th1;
            snap.theta3(m, n) = th3;
            snap.theta2(m, n) = th2;
            snap.theta4(m, n) = th4;

            const cplx exponent = p1 * log_coherent_overlap(bn1, bm1) +
                                  p2 * log_coherent_overlap(bn2, bm2) +
                                  cplx(0.0, th1 + th3) + th2 + th4;
            const double parity = (m == n) ? 1.0 : sign;
            snap.coeffs(m, n) = n2 * parity * std::exp(exponent);
        }
    }
    return snap;
}

ReducedStateSnapshot reduce_to_mode(const JointStateSnapshot& snapshot, int mode) {
    const InitialSuperposition& init = snapshot.init;
    const PropagatorSample& p = snapshot.prop;
    const double e2 = std::norm(p.exp_neg_Lambda_t);
    const double n2 = init.norm * init.norm;
    const double sign = init.relative_sign;

    ReducedStateSnapshot red;
    red.mode = mode;
    red.labels = (mode == 1) ? snapshot.sigma : snapshot.zeta;

    const double q1 = (mode == 1) ? 1.0 - e2 * std::norm(p.W_minus)
                                  : 1.0 - e2 * std::norm(p.Z_minus);
    const double q2 = (mode == 1) ? 1.0 - e2 * std::norm(p.Z_plus)
                                  : 1.0 - e2 * std::norm(p.W_plus);

    for (int m = 0; m < 2; ++m) {
        for (int n = 0; n < 2; ++n) {
            const cplx bm1 = init.beta(m, 1), bm2 = init.beta(m, 2);
            const cplx bn1 = init.beta(n, 1), bn2 = init.beta(n, 2);
            cplx exponent = q1 * log_coherent_overlap(bn1, bm1) +
                            q2 * log_coherent_overlap(bn2, bm2);
            if (mode == 1)
                exponent += cplx(0.0, snapshot.theta3(m, n)) + snapshot.theta4(m, n);
            else
                exponent += cplx(0.0, snapshot.theta1(m, n)) + snapshot.theta2(m, n);
            const double parity = (m == n) ? 1.0 : sign;
            red.coeffs(m, n) = n2 * parity * std::exp(exponent);
        }
    }
    return red;
}

ReducedStateSnapshot reduce_by_partial_trace(const JointStateSnapshot& snapshot, int mode) {
    ReducedStateSnapshot red;
    red.mode = mode;
    red.labels = (mode == 1) ? snapshot.sigma : snapshot.zeta;
    const auto& other = (mode == 1) ? snapshot.zeta : snapshot.sigma;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            red.coeffs(m, n) = snapshot.coeffs(m, n) * coherent_overlap(other[n], other[m]);
    return red;
}

// --------------------------- dyad-state algebra -----------------------------

namespace {

// Gram matrix of the two joint dyad vectors |sigma_m, zeta_m>
Eigen::Matrix2cd joint_gram(const JointStateSnapshot& s) {
    Eigen::Matrix2cd g;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            g(m, n) = coherent_overlap(s.sigma[m], s.sigma[n]) *
                      coherent_overlap(s.zeta[m], s.zeta[n]);
    return g;
}

Eigen::Matrix2cd reduced_gram(const ReducedStateSnapshot& s) {
    Eigen::Matrix2cd g;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            g(m, n) = coherent_overlap(s.labels[m], s.labels[n]);
    return g;
}

double dyad_trace(const Eigen::Matrix2cd& coeffs, const Eigen::Matrix2cd& gram) {
    cplx tr = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            tr += coeffs(m, n) * gram(n, m);
    return tr.real();
}

// Tr[rho^2] = sum_{mnpq} C_mn C_pq <u_n|u_p><u_q|u_m>
double dyad_purity(const Eigen::Matrix2cd& coeffs, const Eigen::Matrix2cd& gram) {
    cplx tr = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            for (int pp = 0; pp < 2; ++pp)
                for (int q = 0; q < 2; ++q)
                    tr += coeffs(m, n) * coeffs(pp, q) * gram(n, pp) * gram(q, m);
    return tr.real();
}

// Positivity on the dyad span: eigenvalues of G^{1/2} C G^{1/2}
double dyad_min_eigenvalue(const Eigen::Matrix2cd& coeffs, const Eigen::Matrix2cd& gram) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> gs(gram);
    Eigen::Matrix2cd sqrt_g = gs.operatorSqrt();
    Eigen::Matrix2cd m = sqrt_g * coeffs * sqrt_g;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es((m + m.adjoint()) * 0.5);
    return es.eigenvalues().minCoeff();
}

} // namespace

double joint_trace(const JointStateSnapshot& s) { return dyad_trace(s.coeffs, joint_gram(s)); }
double joint_purity(const JointStateSnapshot& s) { return dyad_purity(s.coeffs, joint_gram(s)); }
double reduced_trace(const ReducedStateSnapshot& s) { return dyad_trace(s.coeffs, reduced_gram(s)); }
double reduced_purity(const ReducedStateSnapshot& s) { return dyad_purity(s.coeffs, reduced_gram(s)); }

double joint_dyad_trace_product(const JointStateSnapshot& a, const JointStateSnapshot& b) {
    cplx tr = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            for (int pp = 0; pp < 2; ++pp)
                for (int q = 0; q < 2; ++q) {
                    const cplx cross_np = coherent_overlap(a.sigma[n], b.sigma[pp]) *
                                          coherent_overlap(a.zeta[n], b.zeta[pp]);
                    const cplx cross_qm = coherent_overlap(b.sigma[q], a.sigma[m]) *
                                          coherent_overlap(b.zeta[q], a.zeta[m]);
                    tr += a.coeffs(m, n) * b.coeffs(pp, q) * cross_np * cross_qm;
                }
    return tr.real();
}

JointStateSnapshot initial_snapshot(const InitialSuperposition& init, bool swap_modes) {
    JointStateSnapshot snap;
    snap.t = 0.0;
    snap.init = init;
    snap.prop.t = 0.0;
    snap.prop.W_plus = snap.prop.W_minus = 1.0;
    snap.prop.Z_plus = snap.prop.Z_minus = 0.0;
    snap.prop.exp_neg_Lambda_t = 1.0;
    for (int m = 0; m < 2; ++m) {
        const cplx b1 = init.beta(m, 1), b2 = init.beta(m, 2);
        snap.sigma[m] = swap_modes ? b2 : b1;
        snap.zeta[m] = swap_modes ? b1 : b2;
    }
    const double n2 = init.norm * init.norm;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            snap.coeffs(m, n) = n2 * ((m == n) ? 1.0 : double(init.relative_sign));
    snap.theta1.setZero();
    snap.theta3.setZero();
    snap.theta2.setZero();
    snap.theta4.setZero();
    return snap;
}

double joint_min_eigenvalue(const JointStateSnapshot& s) {
    return dyad_min_eigenvalue(s.coeffs, joint_gram(s));
}

double reduced_min_eigenvalue(const ReducedStateSnapshot& s) {
    return dyad_min_eigenvalue(s.coeffs, reduced_gram(s));
}

} // namespace oscnet

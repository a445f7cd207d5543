// closed_form.hpp — Analytic T=0 solution: propagator functions, drift
// characteristics and the evolved joint/reduced density operators for
// two-term coherent superpositions

#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "oscnet/params.hpp"

namespace oscnet {

struct DegenerateCouplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The four mode-mixing functions and the common decay factor at one time.
// W+-(0) = 1, Z+-(0) = 0; without dissipation |W|^2 + |Z|^2 = 1.
struct PropagatorSample {
    double t = 0.0;
    cplx W_plus, W_minus, Z_plus, Z_minus;
    cplx exp_neg_Lambda_t;
};

// N(|beta_I^1, beta_I^2> + s |beta_II^1, beta_II^2>), s = +-1
struct InitialSuperposition {
    cplx beta_I_1, beta_I_2, beta_II_1, beta_II_2;
    int relative_sign = +1;
    double norm = 1.0; // N+-

    cplx beta(int m, int mode) const {
        if (mode == 1) return m == 0 ? beta_I_1 : beta_II_1;
        return m == 0 ? beta_I_2 : beta_II_2;
    }

    static InitialSuperposition make(cplx bI1, cplx bI2, cplx bII1, cplx bII2, int sign);
    // N(|alpha> + s|-alpha>)_1 (x) |eta>_2
    static InitialSuperposition product_cat(cplx alpha, cplx eta, int sign = +1);
    // N(|alpha,-alpha> + s|-alpha,alpha>), eigenstate of the lower normal mode
    static InitialSuperposition eigen_minus(cplx alpha, int sign = +1);
    // N(|alpha,alpha> + s|-alpha,-alpha>), eigenstate of the upper normal mode
    static InitialSuperposition eigen_plus(cplx alpha, int sign = +1);
};

// Four-dyad expansion of the evolved joint state:
//   rho_12(t) = sum_mn C_mn |sigma_m, zeta_m><sigma_n, zeta_n|
struct JointStateSnapshot {
    double t = 0.0;
    std::array<cplx, 2> sigma; // mode-1 labels, m = I, II
    std::array<cplx, 2> zeta;  // mode-2 labels
    Eigen::Matrix2cd coeffs;   // C_mn

    // Phase functions retained for diagnostics; theta1/theta3 are real by
    // construction, theta2/theta4 complex (added to the exponent without i).
    Eigen::Matrix2d theta1, theta3;
    Eigen::Matrix2cd theta2, theta4;

    PropagatorSample prop;
    InitialSuperposition init;
};

// Two-dyad expansion of a reduced single-mode state.
struct ReducedStateSnapshot {
    int mode = 1;
    std::array<cplx, 2> labels;
    Eigen::Matrix2cd coeffs;
};

PropagatorSample propagator(const DerivedCoefficients& coeffs, double t);

// Forward drift characteristics (they grow as e^{Re Lambda t}); these are the
// curves along which the initial P-function is transported.
std::pair<cplx, cplx> characteristic_trajectories(const DerivedCoefficients& coeffs,
                                                  cplx alpha1_0, cplx alpha2_0, double t);

// Physical forward evolution of the joint state.
JointStateSnapshot evolve_joint_state(const InitialSuperposition& init,
                                      const DerivedCoefficients& coeffs, double t);

// Partial trace onto mode 1 or 2, closed form.
ReducedStateSnapshot reduce_to_mode(const JointStateSnapshot& snapshot, int mode);

// Same reduction computed the generic way, C_mn * <other_n|other_m>; used to
// cross-check the closed-form exponents.
ReducedStateSnapshot reduce_by_partial_trace(const JointStateSnapshot& snapshot, int mode);

// --------------------------- dyad-state algebra -----------------------------

double joint_trace(const JointStateSnapshot& snapshot);
double joint_purity(const JointStateSnapshot& snapshot);
double reduced_trace(const ReducedStateSnapshot& state);
double reduced_purity(const ReducedStateSnapshot& state);

// Tr[rho_a rho_b] for two four-dyad joint states
double joint_dyad_trace_product(const JointStateSnapshot& a, const JointStateSnapshot& b);

// Snapshot of the initial state at t = 0 (labels = betas, C_mn = N^2 (+-1)^(1-d_mn)),
// optionally with the two mode labels exchanged.
JointStateSnapshot initial_snapshot(const InitialSuperposition& init, bool swap_modes = false);

// Smallest eigenvalue of rho restricted to the dyad span (exact positivity probe).
double joint_min_eigenvalue(const JointStateSnapshot& snapshot);
double reduced_min_eigenvalue(const ReducedStateSnapshot& state);

} // namespace oscnet

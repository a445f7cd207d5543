// fock.hpp — Brute-force validator: Liouvillian superoperator in a truncated
// two-mode Fock basis, RK4 integration, and comparison against the closed form

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "oscnet/closed_form.hpp"

namespace oscnet {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Regime { Weak, Strong };

using SparseCd = Eigen::SparseMatrix<cplx>;

// Truncated two-mode density matrix; joint index n1 * dim2 + n2.
struct FockDensityMatrix {
    int dim1 = 0, dim2 = 0;
    Eigen::MatrixXcd data;

    double trace() const { return data.trace().real(); }
    double hermiticity_error() const { return (data - data.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
};

// Superoperator acting on the row-major vectorization of rho.
struct LiouvillianMatrix {
    int dim1 = 0, dim2 = 0;
    Regime regime = Regime::Strong;
    bool includes_drive_correction = false;
    double lambda = 0.0; // kept for the integration step guard
    SparseCd op;

    int dim() const { return dim1 * dim2; }
    // max |vec(I)^T L|: the trace functional must annihilate the generator
    double trace_defect() const;
};

// Minimum per-mode truncation for coherent amplitude a: N > 4a^2 + 6a + 4.
int minimum_truncation(double amplitude);

// Single-mode lowering operator (N x N), and sparse Kronecker product with
// row-major index convention (i*p+j, k*q+l).
SparseCd lowering_operator(int n);
SparseCd sparse_kron(const SparseCd& a, const SparseCd& b);

// Row-major vectorization and its inverse.
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int rows, int cols);

LiouvillianMatrix build_liouvillian(const SystemConfig& config, const DampingRates& rates,
                                    const DerivedCoefficients& coeffs, Regime regime,
                                    int n1, int n2, bool include_drive_correction = true);

// Truncated coherent column vector e^{-|b|^2/2} b^n / sqrt(n!).
Eigen::VectorXcd coherent_fock_vector(cplx beta, int n);

FockDensityMatrix coherent_superposition_to_fock(const InitialSuperposition& init,
                                                 int n1, int n2);

FockDensityMatrix snapshot_to_fock(const JointStateSnapshot& snapshot, int n1, int n2);

// Fixed-step RK4 on the vectorized density matrix, re-hermitized every step.
// Rejects lambda*dt > 0.05.
std::vector<FockDensityMatrix> integrate(const LiouvillianMatrix& liouvillian,
                                         const FockDensityMatrix& rho0,
                                         const std::vector<double>& t_grid,
                                         double dt);

struct ComparisonResult {
    double trace_distance = 0.0;
    double fidelity = 1.0;
    double offdiag_ratio = 1.0; // |<u_I|rho_fock|u_II>| / |<u_I|rho_cf|u_II>|
};

ComparisonResult compare(const FockDensityMatrix& oracle_rho, const JointStateSnapshot& snapshot);

double trace_distance(const FockDensityMatrix& a, const FockDensityMatrix& b);
double uhlmann_fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b);

// Partial trace over the other mode.
Eigen::MatrixXcd reduce_fock(const FockDensityMatrix& rho, int mode);

// Binary snapshot dump: endianness tag, dims, time, then row-major
// (re, im) float64 pairs. Little-endian throughout.
void write_density_dump(std::ostream& out, const FockDensityMatrix& rho, double t);
FockDensityMatrix read_density_dump(std::istream& in, double& t);

} // namespace oscnet

#include "oscnet/fock.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace oscnet {

double FockDensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((data + data.adjoint()) * 0.5);
    return es.eigenvalues().minCoeff();
}

double LiouvillianMatrix::trace_defect() const {
    const int d = dim();
    Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) vec_id(i * d + i) = 1.0;
    Eigen::VectorXcd w = op.transpose() * vec_id;
    return w.cwiseAbs().maxCoeff();
}

int minimum_truncation(double amplitude) {
    const double bound = 4.0 * amplitude * amplitude + 6.0 * amplitude + 4.0;
    return int(std::floor(bound)) + 1;
}

SparseCd lowering_operator(int n) {
    SparseCd a(n, n);
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(n);
    for (int k = 1; k < n; ++k) trips.emplace_back(k - 1, k, std::sqrt(double(k)));
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

SparseCd sparse_kron(const SparseCd& a, const SparseCd& b) {
    SparseCd out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(size_t(a.nonZeros()) * size_t(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseCd::InnerIterator ita(a, ka); ita; ++ita)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseCd::InnerIterator itb(b, kb); itb; ++itb)
                    trips.emplace_back(int(ita.row() * b.rows() + itb.row()),
                                       int(ita.col() * b.cols() + itb.col()),
                                       ita.value() * itb.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    const int r = int(rho.rows()), c = int(rho.cols());
    Eigen::VectorXcd v(r * c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) v(i * c + j) = rho(i, j);
    return v;
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int rows, int cols) {
    Eigen::MatrixXcd rho(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) rho(i, j) = v(i * cols + j);
    return rho;
}

namespace {

SparseCd identity_sparse(int n) {
    SparseCd id(n, n);
    id.setIdentity();
    return id;
}

// vec(A rho B) = kron(A, B^T) vec(rho) in the row-major convention
SparseCd left_right(const SparseCd& a, const SparseCd& b) {
    return sparse_kron(a, SparseCd(b.transpose()));
}

} // namespace

LiouvillianMatrix build_liouvillian(const SystemConfig& config, const DampingRates& rates,
                                    const DerivedCoefficients& coeffs, Regime regime,
                                    int n1, int n2, bool include_drive_correction) {
    if (n1 < 2 || n2 < 2) throw TruncationError("truncation must be at least 2 per mode");

    const int d = n1 * n2;
    const SparseCd id_d = identity_sparse(d);
    const SparseCd a1 = sparse_kron(lowering_operator(n1), identity_sparse(n2));
    const SparseCd a2 = sparse_kron(identity_sparse(n1), lowering_operator(n2));
    const SparseCd a1d = SparseCd(a1.adjoint());
    const SparseCd a2d = SparseCd(a2.adjoint());

    const double F = config.drive_amplitude;
    const double lambda = config.lambda;
    const double omega = coeffs.Omega;

    // H0 = Omega (n1 + n2) + lambda (a1+ a2 + a2+ a1) + F (a2+ + a2)
    SparseCd h = omega * SparseCd(a1d * a1) + omega * SparseCd(a2d * a2) +
                 lambda * SparseCd(a1d * a2) + lambda * SparseCd(a2d * a1);
    if (F != 0.0) h += F * SparseCd(a2d + a2);

    // i [rho, H0]
    SparseCd liou = cplx(0.0, 1.0) * (left_right(id_d, h) - left_right(h, id_d));

    auto damping_term = [&](const SparseCd& a, const SparseCd& ad, double kappa) -> SparseCd {
        // kappa/2 (2 a rho a+ - a+a rho - rho a+a)
        const SparseCd n_op = SparseCd(ad * a);
        return SparseCd(0.5 * kappa *
                        (2.0 * left_right(a, ad) - left_right(n_op, id_d) - left_right(id_d, n_op)));
    };

    if (regime == Regime::Weak) {
        liou += damping_term(a1, a1d, config.gamma_scale_1);
        liou += damping_term(a2, a2d, config.gamma_scale_2);
    } else {
        liou += damping_term(a1, a1d, rates.gamma_plus_1 + rates.gamma_minus_1);
        liou += damping_term(a2, a2d, rates.gamma_plus_2 + rates.gamma_minus_2);
        // cross-decay: 1/2 sum_l sum_{m != l} (g_l^+ - g_l^-)([a_m rho, a_l+] + [a_l, rho a_m+])
        auto cross_term = [&](const SparseCd& al, const SparseCd& ald,
                              const SparseCd& am, const SparseCd& amd, double g) -> SparseCd {
            return SparseCd(0.5 * g *
                            (left_right(am, ald) - left_right(SparseCd(ald * am), id_d) +
                             left_right(al, amd) - left_right(id_d, SparseCd(amd * al))));
        };
        liou += cross_term(a1, a1d, a2, a2d, rates.gamma_plus_1 - rates.gamma_minus_1);
        liou += cross_term(a2, a2d, a1, a1d, rates.gamma_plus_2 - rates.gamma_minus_2);
    }

    if (include_drive_correction && F != 0.0) {
        const double det_freq = omega * omega - lambda * lambda;
        double c1, c2;
        if (regime == Regime::Weak) {
            // off-resonance correction per mode; vanishes at resonance
            c1 = F / det_freq * (-lambda) * (rates.gamma_at_drive_1 - 0.5 * config.gamma_scale_1);
            c2 = F / det_freq * omega * (rates.gamma_at_drive_2 - 0.5 * config.gamma_scale_2);
        } else {
            const double pref = F / (2.0 * det_freq);
            c1 = pref * (omega * (rates.gamma_minus_1 - rates.gamma_plus_1) +
                         (-lambda) * (2.0 * rates.gamma_at_drive_1 - rates.gamma_minus_1 -
                                      rates.gamma_plus_1));
            c2 = pref * ((-lambda) * (rates.gamma_minus_2 - rates.gamma_plus_2) +
                         omega * (2.0 * rates.gamma_at_drive_2 - rates.gamma_minus_2 -
                                  rates.gamma_plus_2));
        }
        // c_l [rho, a_l - a_l+]
        const SparseCd x1 = SparseCd(a1 - a1d);
        const SparseCd x2 = SparseCd(a2 - a2d);
        liou += c1 * (left_right(id_d, x1) - left_right(x1, id_d));
        liou += c2 * (left_right(id_d, x2) - left_right(x2, id_d));
    }

    LiouvillianMatrix out;
    out.dim1 = n1;
    out.dim2 = n2;
    out.regime = regime;
    out.includes_drive_correction = include_drive_correction && F != 0.0;
    out.lambda = lambda;
    out.op = std::move(liou);
    return out;
}

Eigen::VectorXcd coherent_fock_vector(cplx beta, int n) {
    Eigen::VectorXcd v(n);
    cplx amp = std::exp(-0.5 * std::norm(beta));
    v(0) = amp;
    for (int k = 1; k < n; ++k) {
        amp *= beta / std::sqrt(double(k));
        v(k) = amp;
    }
    return v;
}

namespace {

void check_truncation(const InitialSuperposition& init, int n1, int n2) {
    const double a1 = std::max(std::abs(init.beta_I_1), std::abs(init.beta_II_1));
    const double a2 = std::max(std::abs(init.beta_I_2), std::abs(init.beta_II_2));
    const int need1 = minimum_truncation(a1);
    const int need2 = minimum_truncation(a2);
    if (n1 < need1 || n2 < need2) {
        std::ostringstream msg;
        msg << "truncation (" << n1 << ", " << n2 << ") too small for amplitudes |beta| = ("
            << a1 << ", " << a2 << "); need at least (" << need1 << ", " << need2 << ")";
        throw TruncationError(msg.str());
    }
}

Eigen::MatrixXcd dyads_to_fock(const std::array<cplx, 2>& lab1, const std::array<cplx, 2>& lab2,
                               const Eigen::Matrix2cd& coeffs, int n1, int n2) {
    const int d = n1 * n2;
    std::array<Eigen::VectorXcd, 2> kets;
    for (int m = 0; m < 2; ++m) {
        const Eigen::VectorXcd v1 = coherent_fock_vector(lab1[m], n1);
        const Eigen::VectorXcd v2 = coherent_fock_vector(lab2[m], n2);
        Eigen::VectorXcd joint(d);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) joint(i * n2 + j) = v1(i) * v2(j);
        kets[m] = joint;
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) rho += coeffs(m, n) * kets[m] * kets[n].adjoint();
    return rho;
}

} // namespace

FockDensityMatrix coherent_superposition_to_fock(const InitialSuperposition& init,
                                                 int n1, int n2) {
    check_truncation(init, n1, n2);
    FockDensityMatrix rho;
    rho.dim1 = n1;
    rho.dim2 = n2;
    const JointStateSnapshot snap = initial_snapshot(init);
    rho.data = dyads_to_fock(snap.sigma, snap.zeta, snap.coeffs, n1, n2);
    return rho;
}

FockDensityMatrix snapshot_to_fock(const JointStateSnapshot& snapshot, int n1, int n2) {
    check_truncation(snapshot.init, n1, n2);
    FockDensityMatrix rho;
    rho.dim1 = n1;
    rho.dim2 = n2;
    rho.data = dyads_to_fock(snapshot.sigma, snapshot.zeta, snapshot.coeffs, n1, n2);
    return rho;
}

namespace {

// max absolute row sum; bounds the spectral radius of the generator
double infinity_norm(const SparseCd& op) {
    std::vector<double> row_sum(op.rows(), 0.0);
    for (int k = 0; k < op.outerSize(); ++k)
        for (SparseCd::InnerIterator it(op, k); it; ++it)
            row_sum[it.row()] += std::abs(it.value());
    double top = 0.0;
    for (double v : row_sum) top = std::max(top, v);
    return top;
}

} // namespace

std::vector<FockDensityMatrix> integrate(const LiouvillianMatrix& liouvillian,
                                         const FockDensityMatrix& rho0,
                                         const std::vector<double>& t_grid,
                                         double dt) {
    if (!(dt > 0.0)) throw StepSizeError("dt must be > 0");
    if (liouvillian.lambda * dt > 0.05) {
        std::ostringstream msg;
        msg << "lambda*dt = " << liouvillian.lambda * dt << " > 0.05; reduce the step";
        throw StepSizeError(msg.str());
    }
    for (size_t i = 0; i + 1 < t_grid.size(); ++i)
        if (!(t_grid[i + 1] > t_grid[i])) throw StepSizeError("t_grid must be strictly increasing");
    if (!t_grid.empty() && t_grid.front() < 0.0) throw StepSizeError("t_grid must start at t >= 0");

    const int d = liouvillian.dim();
    const SparseCd& l_op = liouvillian.op;

    // The coupling-scaled guard alone does not keep the scheme inside its
    // linear stability region when the frame frequency dwarfs the coupling
    // (weak-coupling runs at high truncation), so cap the step against the
    // generator norm as well.
    const double norm_bound = infinity_norm(l_op);
    if (norm_bound > 0.0) dt = std::min(dt, 2.5 / norm_bound);

    Eigen::VectorXcd v = vectorize(rho0.data);
    auto hermitize = [&](Eigen::VectorXcd& state) {
        Eigen::MatrixXcd rho = unvectorize(state, d, d);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        state = vectorize(rho);
    };

    std::vector<FockDensityMatrix> out;
    out.reserve(t_grid.size());
    double t = 0.0;
    Eigen::VectorXcd k1(d * d), k2(d * d), k3(d * d), k4(d * d);
    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const int steps = std::max(1, int(std::ceil(span / dt - 1e-12)));
            const double h = span / steps;
            for (int s = 0; s < steps; ++s) {
                k1.noalias() = l_op * v;
                k2.noalias() = l_op * (v + 0.5 * h * k1);
                k3.noalias() = l_op * (v + 0.5 * h * k2);
                k4.noalias() = l_op * (v + h * k3);
                v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                hermitize(v);
            }
            t = target;
        }
        FockDensityMatrix rho;
        rho.dim1 = liouvillian.dim1;
        rho.dim2 = liouvillian.dim2;
        rho.data = unvectorize(v, d, d);
        out.push_back(std::move(rho));
    }
    return out;
}

double trace_distance(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    Eigen::MatrixXcd diff = a.data - b.data;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double uhlmann_fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    Eigen::MatrixXcd ha = 0.5 * (a.data + a.data.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_a(ha);
    Eigen::VectorXd ev = es_a.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd sqrt_a =
        es_a.eigenvectors() * ev.asDiagonal() * es_a.eigenvectors().adjoint();
    Eigen::MatrixXcd inner = sqrt_a * b.data * sqrt_a;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_i(inner);
    const double root_sum = es_i.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return root_sum * root_sum;
}

ComparisonResult compare(const FockDensityMatrix& oracle_rho, const JointStateSnapshot& snapshot) {
    const FockDensityMatrix cf = snapshot_to_fock(snapshot, oracle_rho.dim1, oracle_rho.dim2);

    ComparisonResult res;
    res.trace_distance = trace_distance(oracle_rho, cf);
    res.fidelity = uhlmann_fidelity(oracle_rho, cf);

    const int d = oracle_rho.dim1 * oracle_rho.dim2;
    std::array<Eigen::VectorXcd, 2> kets;
    for (int m = 0; m < 2; ++m) {
        const Eigen::VectorXcd v1 = coherent_fock_vector(snapshot.sigma[m], oracle_rho.dim1);
        const Eigen::VectorXcd v2 = coherent_fock_vector(snapshot.zeta[m], oracle_rho.dim2);
        Eigen::VectorXcd joint(d);
        for (int i = 0; i < oracle_rho.dim1; ++i)
            for (int j = 0; j < oracle_rho.dim2; ++j)
                joint(i * oracle_rho.dim2 + j) = v1(i) * v2(j);
        kets[m] = joint;
    }
    const cplx off_or = kets[0].adjoint() * oracle_rho.data * kets[1];
    const cplx off_cf = kets[0].adjoint() * cf.data * kets[1];
    res.offdiag_ratio = std::abs(off_cf) > 1e-300 ? std::abs(off_or) / std::abs(off_cf) : 1.0;
    return res;
}

Eigen::MatrixXcd reduce_fock(const FockDensityMatrix& rho, int mode) {
    const int n1 = rho.dim1, n2 = rho.dim2;
    if (mode == 1) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n1, n1);
        for (int i = 0; i < n1; ++i)
            for (int k = 0; k < n1; ++k)
                for (int j = 0; j < n2; ++j) out(i, k) += rho.data(i * n2 + j, k * n2 + j);
        return out;
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n2, n2);
    for (int j = 0; j < n2; ++j)
        for (int l = 0; l < n2; ++l)
            for (int i = 0; i < n1; ++i) out(j, l) += rho.data(i * n2 + j, i * n2 + l);
    return out;
}

void write_density_dump(std::ostream& out, const FockDensityMatrix& rho, double t) {
    const std::uint32_t endian_tag = 0x01020304u;
    const std::uint32_t d1 = std::uint32_t(rho.dim1), d2 = std::uint32_t(rho.dim2);
    out.write(reinterpret_cast<const char*>(&endian_tag), sizeof endian_tag);
    out.write(reinterpret_cast<const char*>(&d1), sizeof d1);
    out.write(reinterpret_cast<const char*>(&d2), sizeof d2);
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    const int d = rho.dim1 * rho.dim2;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double re = rho.data(i, j).real(), im = rho.data(i, j).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

FockDensityMatrix read_density_dump(std::istream& in, double& t) {
    std::uint32_t endian_tag = 0, d1 = 0, d2 = 0;
    in.read(reinterpret_cast<char*>(&endian_tag), sizeof endian_tag);
    if (endian_tag != 0x01020304u)
        throw std::runtime_error("density dump: endianness tag mismatch");
    in.read(reinterpret_cast<char*>(&d1), sizeof d1);
    in.read(reinterpret_cast<char*>(&d2), sizeof d2);
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    FockDensityMatrix rho;
    rho.dim1 = int(d1);
    rho.dim2 = int(d2);
    const int d = rho.dim1 * rho.dim2;
    rho.data.resize(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            rho.data(i, j) = cplx(re, im);
        }
    if (!in) throw std::runtime_error("density dump: truncated stream");
    return rho;
}

} // namespace oscnet

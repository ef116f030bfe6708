#include "sgap/spectral.hpp"

#include "sgap/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace sgap {
namespace {

// S X, column by column through the CSR kernel.
Eigen::MatrixXd apply_stiffness(const DiscreteSpace& space, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd out(X.rows(), X.cols());
    const auto view = space.stiffness_view();
    const auto n = static_cast<std::size_t>(X.rows());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        kernels::parallel::spmv(view, {X.col(j).data(), n}, {out.col(j).data(), n});
    }
    return out;
}

// X^T S Y assembled edge by edge as sum w (x_i - x_j)(y_i - y_j), plus any row-sum
// remainder on the diagonal. Unlike the plain product this keeps full relative
// accuracy for smooth vectors on fine grids, where |S| ~ 1/h^2.
Eigen::MatrixXd energy_form(const DiscreteSpace& space, const Eigen::MatrixXd& X) {
    const SparseMatrix& S = space.stiffness;
    const Eigen::Index n = S.rows();
    Eigen::Index edges = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (SparseMatrix::InnerIterator it(S, i); it; ++it)
            if (it.col() > i) ++edges;
    Eigen::MatrixXd D(edges, X.cols());
    Eigen::VectorXd w(edges);
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(n);
    Eigen::Index e = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (SparseMatrix::InnerIterator it(S, i); it; ++it) {
            rowsum[i] += it.value();
            if (it.col() > i) {
                w[e] = -it.value();
                D.row(e) = X.row(i) - X.row(it.col());
                ++e;
            }
        }
    }
    Eigen::MatrixXd out = D.transpose() * (w.asDiagonal() * D);
    out.noalias() += X.transpose() * rowsum.asDiagonal() * X;
    return 0.5 * (out + out.transpose());
}

void project_constant(Eigen::MatrixXd& X, const Eigen::VectorXd& mass, double vol) {
    const Eigen::RowVectorXd means = (mass.transpose() * X) / vol;
    X.rowwise() -= means;
}

std::vector<double> residual_norms(const Eigen::MatrixXd& SX, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& mass, const Eigen::VectorXd& lambdas) {
    std::vector<double> out(static_cast<std::size_t>(X.cols()));
    const Eigen::VectorXd inv_mass = mass.cwiseInverse();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const Eigen::VectorXd r = SX.col(j) - lambdas[j] * mass.cwiseProduct(X.col(j));
        const double rn = std::sqrt(r.cwiseAbs2().dot(inv_mass));
        const double xn = std::sqrt(X.col(j).cwiseAbs2().dot(mass));
        out[static_cast<std::size_t>(j)] = rn / xn;
    }
    return out;
}

EigenDecomposition with_constant_mode(const DiscreteSpace& space, const std::vector<double>& lambdas,
                                      const Eigen::MatrixXd& phis) {
    EigenDecomposition dec;
    dec.space_name = space.name;
    dec.vol = space.volume();
    dec.count = lambdas.size() + 1;
    dec.lambdas.reserve(dec.count);
    dec.lambdas.push_back(0.0);
    dec.lambdas.insert(dec.lambdas.end(), lambdas.begin(), lambdas.end());
    dec.phis.resize(phis.rows(), static_cast<Eigen::Index>(dec.count));
    dec.phis.col(0).setConstant(1.0 / std::sqrt(dec.vol));
    dec.phis.rightCols(phis.cols()) = phis;
    return dec;
}

EigenDecomposition dense_path(const DiscreteSpace& space, int J) {
    const auto n = static_cast<Eigen::Index>(space.vertex_count());
    const Eigen::VectorXd inv_sqrt_m = space.mass.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (SparseMatrix::InnerIterator it(space.stiffness, i); it; ++it) {
            A(i, it.col()) = it.value() * inv_sqrt_m[i] * inv_sqrt_m[it.col()];
        }
    }
    // The constant mode is known exactly; move it above the spectrum (Gershgorin)
    // so the lowest J returned are the nonzero ones.
    const double shift = 2.0 * A.cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::VectorXd y0 = space.mass.cwiseSqrt() / std::sqrt(space.volume());
    A.noalias() += shift * y0 * y0.transpose();

    std::vector<double> w(static_cast<std::size_t>(n));
    Eigen::MatrixXd Z(n, J);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(J));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), A.data(),
        static_cast<lapack_int>(n), 0.0, 0.0, 1, J, LAPACKE_dlamch('S'), &found, w.data(), Z.data(),
        static_cast<lapack_int>(n), support.data());
    if (info != 0 || found != J) {
        std::ostringstream msg;
        msg << "dsyevr failed (info " << info << ", " << found << " of " << J << " eigenpairs)";
        throw ConvergenceError(msg.str());
    }
    // One Rayleigh-Ritz pass with the accurate energy form: the eigenvalues then
    // carry the (quadratically small) subspace error instead of eps |A|.
    const Eigen::MatrixXd Phi = inv_sqrt_m.asDiagonal() * Z;
    const Eigen::MatrixXd Mr = Phi.transpose() * space.mass.asDiagonal() * Phi;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(energy_form(space, Phi),
                                                                 0.5 * (Mr + Mr.transpose()));
    if (rr.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz refinement failed");
    const Eigen::VectorXd& theta = rr.eigenvalues();
    const std::vector<double> lambdas(theta.data(), theta.data() + J);
    return with_constant_mode(space, lambdas, Phi * rr.eigenvectors());
}

EigenDecomposition iterative_path(const DiscreteSpace& space, int J, const EigenOptions& opt) {
    const auto n = static_cast<Eigen::Index>(space.vertex_count());
    const Eigen::VectorXd& mass = space.mass;
    const double vol = space.volume();
    const Eigen::Index p = std::min<Eigen::Index>(n - 1, J + std::max(8, J));

    Eigen::VectorXd diag_ratio = space.stiffness.diagonal().cwiseQuotient(mass);
    const double sigma = 1e-6 * diag_ratio.maxCoeff();
    Eigen::SparseMatrix<double> shifted = space.stiffness;
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += sigma * mass[i];
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
    if (solver.info() != Eigen::Success) throw ConvergenceError("factorization of S + σM failed");

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < n; ++i) X(i, j) = normal(rng);
    project_constant(X, mass, vol);

    std::vector<double> res;
    Eigen::VectorXd theta;
    for (int it = 0; it < opt.max_iterations; ++it) {
        Eigen::MatrixXd Y = solver.solve(mass.asDiagonal() * X);
        project_constant(Y, mass, vol);
        const Eigen::MatrixXd SY = apply_stiffness(space, Y);
        const Eigen::MatrixXd Mr = Y.transpose() * mass.asDiagonal() * Y;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(
            energy_form(space, Y), 0.5 * (Mr + Mr.transpose()));
        if (rr.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz step failed");
        theta = rr.eigenvalues();
        X = Y * rr.eigenvectors();
        const Eigen::MatrixXd SX = SY * rr.eigenvectors();

        res = residual_norms(SX.leftCols(J), X.leftCols(J), mass, theta.head(J));
        bool done = true;
        for (int j = 0; j < J; ++j) done = done && res[j] <= opt.tolerance * (1.0 + theta[j]);
        if (done) {
            std::vector<double> lambdas(theta.data(), theta.data() + J);
            return with_constant_mode(space, lambdas, X.leftCols(J));
        }
    }
    for (int j = 0; j < J; ++j) {
        if (res[j] > opt.tolerance * (1.0 + theta[j])) {
            std::ostringstream msg;
            msg << "eigenpair " << j + 1 << " did not converge after " << opt.max_iterations
                << " iterations (residual " << res[j] << ")";
            throw ConvergenceError(msg.str());
        }
    }
    throw ConvergenceError("subspace iteration did not converge");
}

}  // namespace

EigenDecomposition lowest_eigenpairs(const DiscreteSpace& space, int J, const EigenOptions& options) {
    const std::size_t n = space.vertex_count();
    if (J < 1) throw DomainError("J must be at least 1");
    if (static_cast<std::size_t>(J) + 1 > n) throw DomainError("J + 1 exceeds the vertex count");
    bool dense = n <= options.dense_threshold;
    if (options.method == EigenMethod::Dense) dense = true;
    if (options.method == EigenMethod::Iterative) dense = false;
    if (!dense && static_cast<std::size_t>(J) + 2 > n) dense = true;
    return dense ? dense_path(space, J) : iterative_path(space, J, options);
}

double rayleigh_quotient(const DiscreteSpace& space, const Eigen::VectorXd& w) {
    return energy_form(space, w)(0, 0) / w.cwiseAbs2().dot(space.mass);
}

double eigen_residual(const DiscreteSpace& space, const EigenDecomposition& dec, std::size_t j) {
    const Eigen::VectorXd phi = dec.phi(j);
    const Eigen::VectorXd r = space.stiffness * phi - dec.lambdas[j] * space.mass.cwiseProduct(phi);
    return std::sqrt(r.cwiseAbs2().dot(space.mass.cwiseInverse())) /
           std::sqrt(phi.cwiseAbs2().dot(space.mass));
}

Eigen::VectorXd random_mean_zero(const DiscreteSpace& space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd w(static_cast<Eigen::Index>(space.vertex_count()));
    for (auto& x : w) x = normal(rng);
    w.array() -= w.dot(space.mass) / space.volume();
    return w;
}

double spectral_gap(const DiscreteSpace& space, const EigenOptions& options) {
    const auto dec = lowest_eigenpairs(space, 1, options);
    const double lambda1 = dec.lambdas[1];
    const double rq = rayleigh_quotient(space, dec.phi(1));
    if (std::abs(rq - lambda1) > 1e-10 * std::abs(lambda1)) {
        std::ostringstream msg;
        msg << "Rayleigh quotient of φ₁ (" << rq << ") disagrees with λ₁ (" << lambda1 << ")";
        throw ConvergenceError(msg.str());
    }
    for (std::uint64_t k = 0; k < 5; ++k) {
        const double q = rayleigh_quotient(space, random_mean_zero(space, options.seed + k));
        if (q < lambda1 - 1e-10) {
            std::ostringstream msg;
            msg << "random mean-zero vector has Rayleigh quotient " << q << " below λ₁ = " << lambda1;
            throw ConvergenceError(msg.str());
        }
    }
    return lambda1;
}

std::vector<std::vector<std::size_t>> eigenvalue_clusters(const EigenDecomposition& dec, double rel) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t j = 1; j < dec.count; ++j) {
        const double lam = dec.lambdas[j];
        if (!out.empty()) {
            const double prev = dec.lambdas[out.back().back()];
            if (std::abs(lam - prev) <= rel * std::max(std::abs(lam), std::abs(prev))) {
                out.back().push_back(j);
                continue;
            }
        }
        out.push_back({j});
    }
    return out;
}

}  // namespace sgap

#pragma once

#include "sgap/discrete_spaces.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace sgap {

/// Lowest eigenpairs of stiffness phi = lambda mass phi. Column j of `phis` is
/// phi_j, mass-orthonormal; lambda_0 = 0 with phi_0 = 1 / sqrt(vol).
struct EigenDecomposition {
    std::string space_name;
    std::size_t count = 0;  // J + 1
    std::vector<double> lambdas;
    Eigen::MatrixXd phis;
    double vol = 0.0;

    Eigen::VectorXd phi(std::size_t j) const { return phis.col(static_cast<Eigen::Index>(j)); }
};

enum class EigenMethod { Auto, Dense, Iterative };

struct EigenOptions {
    EigenMethod method = EigenMethod::Auto;
    std::size_t dense_threshold = 3000;  // vertex count at or below which Auto goes dense
    std::uint64_t seed = 42;             // starting block of the iterative path
    int max_iterations = 2000;
    double tolerance = 1e-8;             // residual <= tolerance (1 + lambda) |phi|_M
};

/// The J + 1 lowest eigenpairs. Dense path: mass^{-1/2} congruence, constant mode
/// shifted out of the way, LAPACK dsyevr on the lowest J. Iterative path: block
/// shift-invert subspace iteration with the constant projected out and
/// Rayleigh-Ritz each sweep. Throws ConvergenceError naming the first eigenpair
/// whose residual stays above tolerance after max_iterations.
EigenDecomposition lowest_eigenpairs(const DiscreteSpace& space, int J,
                                     const EigenOptions& options = {});

/// lambda_1, cross-checked against the Rayleigh quotient of phi_1 and of five
/// seeded random mean-zero vectors. Throws ConvergenceError if either check fails.
double spectral_gap(const DiscreteSpace& space, const EigenOptions& options = {});

/// w^T S w / w^T M w.
double rayleigh_quotient(const DiscreteSpace& space, const Eigen::VectorXd& w);

/// |S phi_j - lambda_j M phi_j| in the M^{-1} norm over |phi_j|_M.
double eigen_residual(const DiscreteSpace& space, const EigenDecomposition& dec, std::size_t j);

/// Index groups of nonzero eigenvalues within `rel` relative of their neighbour.
std::vector<std::vector<std::size_t>> eigenvalue_clusters(const EigenDecomposition& dec,
                                                          double rel = 1e-6);

/// Mean-zero (w.r.t. mass) random vector, deterministic in `seed`.
Eigen::VectorXd random_mean_zero(const DiscreteSpace& space, std::uint64_t seed);

}  // namespace sgap

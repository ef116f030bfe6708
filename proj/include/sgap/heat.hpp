#pragma once

#include "sgap/check_outcome.hpp"
#include "sgap/discrete_spaces.hpp"
#include "sgap/spectral.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace sgap {

/// p_t(x, y) = 1/vol + sum_{j=1..J} exp(-lambda_j t) phi_j(x) phi_j(y).
struct SpectralHeatKernel {
    EigenDecomposition decomposition;
    Eigen::VectorXd mass;  // vertex weights of the space, for <f, phi_j>
    double vol = 0.0;
    double t_min = 0.0;  // exp(-lambda_J t_min) <= 1e-10 / J

    std::size_t modes() const { return decomposition.count - 1; }
    /// J exp(-lambda_J t): bound on the discarded tail relative to the kept one.
    double truncation_bound(double t) const;
    bool below_t_min(double t) const { return t < t_min; }
};

/// Smallest J (index into ascending `lambdas`, lambdas[0] = 0) with
/// exp(-lambdas[J] t_min) <= eps / J, or nullopt if none qualifies.
std::optional<std::size_t> truncation_level(const std::vector<double>& lambdas, double t_min,
                                            double eps = 1e-10);

/// Kernel on the lowest J nonzero modes; t_min = ln(J / eps) / lambda_J.
SpectralHeatKernel make_heat_kernel(const DiscreteSpace& space, int J,
                                    const EigenOptions& options = {});

/// Kernel accurate from t_min on: J grows (doubling) until truncation_level
/// finds a qualifying mode, then the decomposition is cut there.
SpectralHeatKernel make_heat_kernel_for(const DiscreteSpace& space, double t_min,
                                        const EigenOptions& options = {});

double heat_kernel_value(const SpectralHeatKernel& kernel, double t, int x, int y);

/// p_t(., y) for all x.
Eigen::VectorXd heat_kernel_row(const SpectralHeatKernel& kernel, double t, int y);

struct HeatSolution {
    double t = 0.0;
    std::vector<double> coefficients;  // <f, phi_j>_M
    Eigen::VectorXd u;
    Eigen::VectorXd du_dt;             // exact spectral derivative
    double projection_residual = 0.0;  // |f - P_J f|_M / |f|_M
    bool truncated = false;            // t < t_min and f is not resolved by the modes
};

HeatSolution evolve(const SpectralHeatKernel& kernel, const Eigen::VectorXd& f, double t);

/// Q = |grad log u|^2 - d_t u / u with u = T_t f. Throws PositivityError if
/// min u <= 0.
Eigen::VectorXd li_yau_quantity(const DiscreteSpace& space, const SpectralHeatKernel& kernel,
                                const Eigen::VectorXd& f, double t);

/// lhs = max over t in t_grid and x of Q 2t / n; AtMost against 1 with slack
/// tau_LY. Not applicable when the space has a boundary or K < 0.
CheckOutcome check_li_yau(const DiscreteSpace& space, const SpectralHeatKernel& kernel,
                          const Eigen::VectorXd& f, const std::vector<double>& t_grid);

struct HarnackPair {
    int x1;
    double t1;
    int x2;
    double t2;
};

/// Uniform vertices, times uniform in [t_lo, t_hi] with t1 < t2.
std::vector<HarnackPair> random_pairs(const DiscreteSpace& space, std::size_t count, double t_lo,
                                      double t_hi, std::uint64_t seed);

/// lhs = max over pairs of u(x1,t1) / (u(x2,t2) (t2/t1)^{n/2} exp(d^2 / 4(t2 - t1)));
/// AtMost against 1 with slack tau_H.
CheckOutcome check_harnack(const DiscreteSpace& space, const SpectralHeatKernel& kernel,
                           const Eigen::VectorXd& f, const std::vector<HarnackPair>& pairs);

/// n log-spaced points from a to b inclusive.
std::vector<double> log_grid(double a, double b, int n);

}  // namespace sgap

#pragma once

#include "sgap/check_outcome.hpp"
#include "sgap/discrete_spaces.hpp"
#include "sgap/model_ode.hpp"
#include "sgap/spectral.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>

namespace sgap {

/// Model parameters matched to a space: l = n_dim (2 for curves, where K = 0
/// makes l irrelevant) and R = (l - 1) K.
ModelParams model_params_for(const DiscreteSpace& space);

/// Diameter fed to the model, clipped to pi / sqrt(K) when it overshoots by less
/// than the eigen budget. Throws DomainError beyond that.
double model_diameter(const DiscreteSpace& space);

/// Spectral gap against lambda1(K, n_dim, diameter). AtLeast with slack tau * rhs.
CheckOutcome check_eigenvalue_bound(const DiscreteSpace& space, const EigenOptions& options = {});
CheckOutcome check_eigenvalue_bound(const DiscreteSpace& space, double spectral_gap_value);

/// Scales by max(|min f|, |max f|) and flips the sign if needed so that
/// min = -1 and max <= 1. Throws DomainError for constant f.
Eigen::VectorXd normalize_eigenfunction(const Eigen::VectorXd& f);

/// Monotone inverse of the model solution on [a, b], where v runs from -1 to m.
class ModelInverse {
public:
    /// `sol` must carry b and m (see first_critical_point).
    explicit ModelInverse(IvpSolution sol);

    /// x in [a, b] with v(x) = y; y is clamped into [-1, m].
    double operator()(double y) const;
    /// v'(v^{-1}(y)).
    double slope_at_value(double y) const;

    double a() const { return sol_.a(); }
    double b() const { return *sol_.b; }
    double m() const { return *sol_.m; }
    const IvpSolution& solution() const { return sol_; }

private:
    IvpSolution sol_;
    std::size_t last_;  // grid nodes up to here lie in [a, b]
};

/// The eigenvalue fed to the model for the maximum and gradient checks. The
/// hypothesis lambda > n K is accepted when the discrete value falls short by at
/// most the eigen budget; the model then runs at max(lambda, n K). Returns
/// nullopt (hypothesis failed) otherwise.
std::optional<double> model_lambda(const DiscreteSpace& space, double lambda_discrete);

/// max f of the normalized phi_1 against m_{R,n}. AtLeast with slack tau.
CheckOutcome check_max_comparison(const DiscreteSpace& space, const EigenOptions& options = {});
CheckOutcome check_max_comparison(const DiscreteSpace& space, const EigenDecomposition& dec);

/// Pointwise |grad f|^2 <= (v' o v^{-1})^2 (f). AtMost with slack tau_g * max rhs;
/// lhs/rhs report the worst vertex.
CheckOutcome check_gradient_comparison(const DiscreteSpace& space, const EigenOptions& options = {});
CheckOutcome check_gradient_comparison(const DiscreteSpace& space, const EigenDecomposition& dec);
/// Same with an explicit eigenfunction f (normalized here) and its eigenvalue.
CheckOutcome check_gradient_comparison(const DiscreteSpace& space, double lambda,
                                       const Eigen::VectorXd& f);

}  // namespace sgap

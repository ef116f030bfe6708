#include "sgap/comparison_checks.hpp"

#include "sgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sgap {
namespace {

// Curvature is vacuous on curves; their model is the flat one.
double model_K(const DiscreteSpace& s) { return s.n_dim == 1 ? 0.0 : s.K; }
double model_n(const DiscreteSpace& s) { return s.n_dim == 1 ? 2.0 : static_cast<double>(s.n_dim); }

std::string fmt(double x) {
    std::ostringstream o;
    o.precision(10);
    o << x;
    return o.str();
}

}  // namespace

ModelParams model_params_for(const DiscreteSpace& space) {
    return ModelParams::from_curvature(model_K(space), model_n(space));
}

double model_diameter(const DiscreteSpace& space) {
    const double K = model_K(space);
    if (!(K > 0.0)) return space.diameter;
    const double limit = std::numbers::pi / std::sqrt(K);
    if (space.diameter <= limit) return space.diameter;
    if (space.diameter <= limit * (1.0 + space.budget.eigen)) return limit;
    throw DomainError("diameter " + fmt(space.diameter) + " exceeds π/√K beyond the mesh allowance");
}

CheckOutcome check_eigenvalue_bound(const DiscreteSpace& space, double gap) {
    CheckOutcome c;
    c.check_name = "eigenvalue_bound";
    c.space_name = space.name;
    c.orientation = Orientation::AtLeast;
    c.lhs = gap;
    c.rhs = neumann_lambda1(model_K(space), model_n(space), model_diameter(space)).lambda1;
    c.slack_used = space.budget.eigen * c.rhs;
    c.detail.magnitude = c.rhs - c.lhs;
    settle(c);
    return c;
}

CheckOutcome check_eigenvalue_bound(const DiscreteSpace& space, const EigenOptions& options) {
    return check_eigenvalue_bound(space, spectral_gap(space, options));
}

Eigen::VectorXd normalize_eigenfunction(const Eigen::VectorXd& f) {
    if (f.size() == 0) throw DomainError("empty vertex function");
    const double lo = f.minCoeff();
    const double hi = f.maxCoeff();
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (!(hi - lo > 1e-300) || !(scale > 0.0)) throw DomainError("degenerate input: f is constant");
    // the larger deviation goes to -1
    const double sign = std::abs(lo) >= std::abs(hi) ? 1.0 : -1.0;
    Eigen::VectorXd out = f * (sign / scale);
    // make the extreme exact despite rounding in the division
    Eigen::Index at;
    out.minCoeff(&at);
    out[at] = -1.0;
    return out;
}

ModelInverse::ModelInverse(IvpSolution sol) : sol_(std::move(sol)) {
    if (!sol_.b || !sol_.m) throw DomainError("model solution has no critical point");
    last_ = 0;
    while (last_ + 1 < sol_.grid.size() && sol_.grid[last_ + 1] <= *sol_.b) ++last_;
}

double ModelInverse::operator()(double y) const {
    const double lo_v = sol_.v.front();
    if (y <= lo_v) return a();
    if (y >= m()) return b();

    // bracket on the stored nodes, then safeguarded Newton on the dense output
    const auto first = sol_.v.begin();
    const auto it = std::upper_bound(first, first + static_cast<long>(last_) + 1, y);
    const std::size_t k = static_cast<std::size_t>(it - first);  // v[k-1] <= y < v[k]
    double lo = sol_.grid[k - 1];
    double hi = k <= last_ ? sol_.grid[k] : b();
    const double vlo = sol_.v[k - 1];
    const double vhi = k <= last_ ? sol_.v[k] : m();
    double x = vhi > vlo ? lo + (hi - lo) * (y - vlo) / (vhi - vlo) : 0.5 * (lo + hi);

    for (int iter = 0; iter < 100; ++iter) {
        const auto s = sol_.evaluate(x);
        const double r = s[0] - y;
        if (r == 0.0) return x;
        (r < 0.0 ? lo : hi) = x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            break;
        double next = s[1] > 0.0 ? x - r / s[1] : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

double ModelInverse::slope_at_value(double y) const { return sol_.evaluate((*this)(y))[1]; }

std::optional<double> model_lambda(const DiscreteSpace& space, double lambda) {
    const double nK = model_n(space) * model_K(space);
    const double floor = std::max(0.0, nK);
    if (lambda > floor) return lambda;
    if (nK > 0.0 && lambda >= nK * (1.0 - space.budget.eigen)) return nK;
    return std::nullopt;
}

namespace {

std::string hypothesis_note(const DiscreteSpace& space, double lambda) {
    return "λ₁ = " + fmt(lambda) + " does not exceed max{0, nK} = " +
           fmt(std::max(0.0, model_n(space) * model_K(space))) + " within budget";
}

}  // namespace

CheckOutcome check_max_comparison(const DiscreteSpace& space, const EigenDecomposition& dec) {
    const double lambda = dec.lambdas.at(1);
    const auto lam = model_lambda(space, lambda);
    if (!lam) return not_applicable("max_comparison", space.name, hypothesis_note(space, lambda));

    IvpSolution sol = model_extremum(model_params_for(space), *lam);
    const Eigen::VectorXd f = normalize_eigenfunction(dec.phi(1));
    CheckOutcome c;
    c.check_name = "max_comparison";
    c.space_name = space.name;
    c.orientation = Orientation::AtLeast;
    Eigen::Index at;
    c.lhs = f.maxCoeff(&at);
    c.rhs = *sol.m;
    c.slack_used = space.budget.eigen;
    c.detail = {static_cast<long>(at), c.rhs - c.lhs};
    if (*lam != lambda) c.note = "model evaluated at λ = nK";
    settle(c);
    return c;
}

CheckOutcome check_max_comparison(const DiscreteSpace& space, const EigenOptions& options) {
    return check_max_comparison(space, lowest_eigenpairs(space, 1, options));
}

CheckOutcome check_gradient_comparison(const DiscreteSpace& space, double lambda,
                                       const Eigen::VectorXd& phi) {
    const auto lam = model_lambda(space, lambda);
    if (!lam) return not_applicable("gradient_comparison", space.name, hypothesis_note(space, lambda));

    const ModelInverse inv(model_extremum(model_params_for(space), *lam));
    Eigen::VectorXd f = normalize_eigenfunction(phi);
    const double excess = f.maxCoeff() - inv.m();
    if (excess > space.budget.eigen) {
        return not_applicable("gradient_comparison", space.name,
                              "max f exceeds m by " + fmt(excess) + "; model range does not cover f");
    }
    f = f.cwiseMin(inv.m());

    const Eigen::VectorXd grad = discrete_gradient_norm(space, f);
    const auto n = f.size();
    Eigen::VectorXd rhs(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = inv.slope_at_value(f[i]);
        rhs[i] = s * s;
    }
    const Eigen::VectorXd lhs = grad.cwiseAbs2();
    Eigen::Index worst;
    (lhs - rhs).maxCoeff(&worst);

    CheckOutcome c;
    c.check_name = "gradient_comparison";
    c.space_name = space.name;
    c.orientation = Orientation::AtMost;
    c.lhs = lhs[worst];
    c.rhs = rhs[worst];
    c.slack_used = space.budget.gradient * rhs.maxCoeff();
    c.detail = {static_cast<long>(worst), lhs[worst] - rhs[worst]};
    if (excess > 0.0) c.note = "f clamped to m (excess " + fmt(excess) + ")";
    settle(c);
    return c;
}

CheckOutcome check_gradient_comparison(const DiscreteSpace& space, const EigenDecomposition& dec) {
    return check_gradient_comparison(space, dec.lambdas.at(1), dec.phi(1));
}

CheckOutcome check_gradient_comparison(const DiscreteSpace& space, const EigenOptions& options) {
    return check_gradient_comparison(space, lowest_eigenpairs(space, 1, options));
}

}  // namespace sgap

#pragma once

#include "sgap/ode_integrator.hpp"

#include <optional>
#include <vector>

namespace sgap {

/// The pair (R, l) selecting the one-dimensional model operator
///   L v = v'' - (l-1) T(x) v',   K = R / (l-1).
/// K is always derived from R and l, never stored independently.
class ModelParams {
public:
    /// Throws DomainError unless l > 1 and R is finite.
    ModelParams(double R, double l);

    /// Builds (R, l) = ((l-1) K, l).
    static ModelParams from_curvature(double K, double l);

    double R() const noexcept { return R_; }
    double l() const noexcept { return l_; }
    double K() const noexcept { return R_ / (l_ - 1.0); }

private:
    double R_;
    double l_;
};

/// Left initial point a and right end of the maximal domain (+inf when R <= 0).
struct ModelDomain {
    double a;
    double right_limit;
};

ModelDomain model_domain(const ModelParams& params);

/// T(x): sqrt(K) tan(sqrt(K) x) for K > 0, 0 for K = 0, -sqrt(-K) tanh(sqrt(-K) x) for K < 0.
/// Throws DomainError when K > 0 and |x| >= pi / (2 sqrt(K)).
double drift_coefficient(double K, double x);
double drift_coefficient(const ModelParams& params, double x);

/// Weight rho(s) = cos^{l-1}(sqrt(K) s), s^{l-1}, or sinh^{l-1}(sqrt(-K) s).
double density(const ModelParams& params, double s);

/// Dense solution of L v = -lambda v with v(a) = -1, v'(a) = 0.
///
/// When R > 0 the start point is singular (T blows up), so the first node is
/// reached with the even Taylor expansion v = -1 + c2 s^2 + c4 s^4 about a.
/// For lambda = l K exactly the solution is regular at the right end as well; it
/// is then assembled from a left shot and a right shot matched at x = 0, which
/// lets the grid reach the right end.
class IvpSolution {
public:
    ModelParams params;
    double lambda;
    std::vector<double> grid;
    std::vector<double> v;
    std::vector<double> v_prime;
    std::optional<double> b;
    std::optional<double> m;

    double a() const { return grid.front(); }
    double end() const { return grid.back(); }

    /// (v, v') at any x in [a(), end()].
    ode::State evaluate(double x) const;

private:
    friend IvpSolution solve_model_ivp(const ModelParams&, double, double);

    IvpSolution(const ModelParams& p, double lam) : params(p), lambda(lam) {}

    struct Expansion {
        double origin;  // expansion point (a or the right end)
        double radius;  // valid for |x - origin| <= radius
        double value;   // v(origin)
        double c2;
        double c4;
    };
    static ode::State evaluate_expansion(const Expansion& e, double x);

    std::optional<Expansion> left_;
    std::optional<Expansion> right_;
    std::size_t split_ = 0;  // nodes past split_ were produced by the backward shot
};

/// Solves the model IVP on [a, x_max]. When R > 0, lambda != l K and x_max reaches
/// the singular right end, the grid stops one start-step short of it.
IvpSolution solve_model_ivp(const ModelParams& params, double lambda, double x_max);

struct CriticalPoint {
    double b;
    double m;
};

/// First x > a where v' vanishes, refined by bisection on the dense output, and
/// m = v(b). Stores both in the solution. Throws NotFoundError if v' > 0 on the
/// whole grid.
CriticalPoint first_critical_point(IvpSolution& sol);

/// Solves far enough to contain b (the whole domain when R > 0, doubling x_max
/// otherwise) and fills in b and m.
IvpSolution model_extremum(const ModelParams& params, double lambda);

struct SampledFunction {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> v_prime;
};

struct NeumannEigenResult {
    double K;
    double n;
    double d;
    double lambda1;
    double residual;  // |v(0)|, the odd-matching defect (max |v| = 1)
    SampledFunction eigenfunction;
};

/// v(0) for the shot from -d/2 with v = -1, v' = 0. The model is symmetric and the
/// first eigenfunction odd, so the first positive zero in lambda is lambda1.
double neumann_defect(double K, double n, double d, double lambda);

/// First nonzero Neumann eigenvalue of v'' - (n-1) T v' = -lambda v on (-d/2, d/2).
/// Shooting: geometric scan (ratio 1.05 from 1e-8) for the first sign change of the
/// defect, then bisection to relative 1e-10. The eigenfunction is the left half
/// reflected oddly. The full-sphere case d = pi/sqrt(K)
/// returns n K.
NeumannEigenResult neumann_lambda1(double K, double n, double d);

/// Independent check of neumann_lambda1: first nonzero eigenvalue of the
/// symmetric finite-difference discretization of (w v')' = -lambda w v with
/// w = exp(-(n-1) \int T), N cells, Neumann ends. Second-order accurate.
double sturm_liouville_oracle(double K, double n, double d, int N);

}  // namespace sgap

#include "sgap/model_ode.hpp"

#include "sgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sgap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr ode::Tolerance kTol{1e-12, 1e-10};

// Relative distance below which d is taken to be the full-sphere diameter pi/sqrt(K)
// and lambda is taken to be the regular-endpoint value l K.
constexpr double kBoundaryRel = 1e-12;

ode::Rhs model_rhs(double K, double l, double lambda) {
    return [K, l, lambda](double x, const ode::State& y) -> ode::State {
        return {y[1], (l - 1.0) * drift_coefficient(K, x) * y[1] - lambda * y[0]};
    };
}

void check_neumann_inputs(double K, double n, double d) {
    if (!(n > 1.0)) throw DomainError("n must exceed 1");
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("d must be positive");
    if (!std::isfinite(K)) throw DomainError("K must be finite");
    if (K > 0.0 && d > kPi / std::sqrt(K) * (1.0 + kBoundaryRel)) {
        throw DomainError("d exceeds π/√K");
    }
}

bool is_full_sphere(double K, double d) {
    return K > 0.0 && d >= kPi / std::sqrt(K) * (1.0 - kBoundaryRel);
}

}  // namespace

ModelParams::ModelParams(double R, double l) : R_(R), l_(l) {
    if (!(l > 1.0) || !std::isfinite(l)) throw DomainError("l must exceed 1");
    if (!std::isfinite(R)) throw DomainError("R must be finite");
}

ModelParams ModelParams::from_curvature(double K, double l) {
    if (!(l > 1.0)) throw DomainError("l must exceed 1");
    return ModelParams((l - 1.0) * K, l);
}

ModelDomain model_domain(const ModelParams& params) {
    if (params.R() > 0.0) {
        const double half = kPi / (2.0 * std::sqrt(params.K()));
        return {-half, half};
    }
    return {0.0, std::numeric_limits<double>::infinity()};
}

double drift_coefficient(double K, double x) {
    if (K > 0.0) {
        const double sk = std::sqrt(K);
        if (std::abs(x) >= kPi / (2.0 * sk)) {
            throw DomainError("x outside (-π/(2√K), π/(2√K))");
        }
        return sk * std::tan(sk * x);
    }
    if (K < 0.0) {
        const double sk = std::sqrt(-K);
        return -sk * std::tanh(sk * x);
    }
    return 0.0;
}

double drift_coefficient(const ModelParams& params, double x) {
    return drift_coefficient(params.K(), x);
}

double density(const ModelParams& params, double s) {
    const double K = params.K();
    const double p = params.l() - 1.0;
    if (K > 0.0) {
        const double sk = std::sqrt(K);
        if (std::abs(s) > kPi / (2.0 * sk)) throw DomainError("s outside the model domain");
        return std::pow(std::max(0.0, std::cos(sk * s)), p);
    }
    if (s < 0.0) throw DomainError("s must be non-negative when K <= 0");
    if (K < 0.0) return std::pow(std::sinh(std::sqrt(-K) * s), p);
    return std::pow(s, p);
}

// ---------------------------------------------------------------------------
// IvpSolution

ode::State IvpSolution::evaluate_expansion(const Expansion& e, double x) {
    const double s = x - e.origin;
    const double s2 = s * s;
    return {e.value * (1.0 + e.c2 * s2 + e.c4 * s2 * s2),
            e.value * (2.0 * e.c2 * s + 4.0 * e.c4 * s2 * s)};
}

ode::State IvpSolution::evaluate(double x) const {
    if (x < grid.front() || x > grid.back()) {
        throw DomainError("evaluation point outside the integrated range");
    }
    if (left_ && x <= left_->origin + left_->radius) return evaluate_expansion(*left_, x);
    if (right_ && x >= right_->origin - right_->radius) return evaluate_expansion(*right_, x);

    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    std::size_t k = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    if (k + 1 >= grid.size()) k = grid.size() - 2;

    const ode::Rhs rhs = model_rhs(params.K(), params.l(), lambda);
    if (k + 1 <= split_) {
        return ode::single_step(rhs, grid[k], {v[k], v_prime[k]}, x);
    }
    return ode::single_step(rhs, grid[k + 1], {v[k + 1], v_prime[k + 1]}, x);
}

IvpSolution solve_model_ivp(const ModelParams& params, double lambda, double x_max) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
    const ModelDomain dom = model_domain(params);
    if (!(x_max > dom.a)) throw DomainError("x_max must exceed the initial point a");
    if (x_max > dom.right_limit * (1.0 + kBoundaryRel)) {
        throw DomainError("x_max exceeds the maximal domain");
    }

    const double K = params.K();
    const double l = params.l();
    const ode::Rhs rhs = model_rhs(K, l, lambda);

    IvpSolution sol(params, lambda);
    auto append = [&sol](const ode::Trajectory& t, std::size_t skip_first) {
        for (std::size_t i = skip_first; i < t.x.size(); ++i) {
            sol.grid.push_back(t.x[i]);
            sol.v.push_back(t.y[i][0]);
            sol.v_prime.push_back(t.y[i][1]);
        }
    };

    if (params.R() <= 0.0) {
        sol.grid = {dom.a};
        sol.v = {-1.0};
        sol.v_prime = {0.0};
        append(ode::integrate(rhs, dom.a, {-1.0, 0.0}, x_max, kTol), 1);
        sol.split_ = sol.grid.size() - 1;
        return sol;
    }

    // Singular start. Even expansion about a with s = x - a:
    //   c2 = lambda / (2 l),  c4 = c2 ((2/3)(l-1) K - lambda) / (4 (l+2)).
    const double c = dom.right_limit;
    const double length = c - dom.a;
    const double h = std::min(1e-4 * length, (x_max - dom.a) / 4.0);
    const double c2 = -lambda / (2.0 * l);  // relative to the value at the expansion point
    const double c4 = c2 * (2.0 / 3.0 * (l - 1.0) * K - lambda) / (4.0 * (l + 2.0));
    sol.left_ = IvpSolution::Expansion{dom.a, h, -1.0, c2, c4};

    const ode::State start = IvpSolution::evaluate_expansion(*sol.left_, dom.a + h);
    sol.grid = {dom.a};
    sol.v = {-1.0};
    sol.v_prime = {0.0};

    const bool reaches_end = x_max >= c * (1.0 - kBoundaryRel);
    const bool regular_end = std::abs(lambda - l * K) <= kBoundaryRel * lambda;

    if (!(reaches_end && regular_end)) {
        const double stop = std::min(x_max, c - h);
        append(ode::integrate(rhs, dom.a + h, start, stop, kTol), 0);
        sol.split_ = sol.grid.size() - 1;
        return sol;
    }

    // lambda = l K: shoot from both singular ends and match at the midpoint 0.
    const ode::Trajectory left = ode::integrate(rhs, dom.a + h, start, 0.0, kTol);
    IvpSolution::Expansion right{c, h, 1.0, c2, c4};
    const ode::State rstart = IvpSolution::evaluate_expansion(right, c - h);
    const ode::Trajectory back = ode::integrate(rhs, c - h, rstart, 0.0, kTol);

    const ode::State vl = left.y.back();
    const ode::State wr = back.y.back();
    const double alpha = (vl[0] * wr[0] + vl[1] * wr[1]) / (wr[0] * wr[0] + wr[1] * wr[1]);
    right.value = alpha;
    sol.right_ = right;

    append(left, 0);
    sol.split_ = sol.grid.size() - 1;
    for (std::size_t i = back.x.size() - 1; i-- > 0;) {
        sol.grid.push_back(back.x[i]);
        sol.v.push_back(alpha * back.y[i][0]);
        sol.v_prime.push_back(alpha * back.y[i][1]);
    }
    sol.grid.push_back(c);
    sol.v.push_back(alpha);
    sol.v_prime.push_back(0.0);
    return sol;
}

CriticalPoint first_critical_point(IvpSolution& sol) {
    const std::size_t n = sol.grid.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (sol.v_prime[i] > 0.0) continue;
        double lo = sol.grid[i - 1];
        double hi = sol.grid[i];
        if (sol.v_prime[i] < 0.0) {
            while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (sol.evaluate(mid)[1] > 0.0 ? lo : hi) = mid;
            }
        } else {
            lo = hi;
        }
        const double b = 0.5 * (lo + hi);
        const double m = sol.evaluate(b)[0];
        sol.b = b;
        sol.m = m;
        return {b, m};
    }
    throw NotFoundError("v' stays positive on the integrated range; extend x_max");
}

IvpSolution model_extremum(const ModelParams& params, double lambda) {
    const ModelDomain dom = model_domain(params);
    if (params.R() > 0.0) {
        IvpSolution sol = solve_model_ivp(params, lambda, dom.right_limit);
        first_critical_point(sol);
        return sol;
    }
    double x_max = 2.0 * kPi / std::sqrt(lambda);
    for (int attempt = 0; attempt < 24; ++attempt, x_max *= 2.0) {
        IvpSolution sol = solve_model_ivp(params, lambda, x_max);
        try {
            first_critical_point(sol);
            return sol;
        } catch (const NotFoundError&) {
        }
    }
    throw NotFoundError("no critical point of the model solution found");
}

// ---------------------------------------------------------------------------
// Neumann eigenvalue on the symmetric interval

double neumann_defect(double K, double n, double d, double lambda) {
    check_neumann_inputs(K, n, d);
    // Shooting only to the midpoint: for K > 0 the drift damps the left half and
    // amplifies the right half by cos^{1-n}, so a full-width shot loses v'(d/2).
    const ode::Trajectory t =
        ode::integrate(model_rhs(K, n, lambda), -d / 2, {-1.0, 0.0}, 0.0, kTol);
    return t.y.back()[0];
}

NeumannEigenResult neumann_lambda1(double K, double n, double d) {
    check_neumann_inputs(K, n, d);
    NeumannEigenResult out{K, n, d, 0.0, 0.0, {}};

    if (is_full_sphere(K, d)) {
        const double sk = std::sqrt(K);
        const double half = kPi / (2.0 * sk);
        out.lambda1 = n * K;
        constexpr int samples = 1001;
        for (int i = 0; i < samples; ++i) {
            const double x = -half + 2.0 * half * i / (samples - 1);
            out.eigenfunction.x.push_back(x);
            out.eigenfunction.v.push_back(std::sin(sk * x));
            out.eigenfunction.v_prime.push_back(sk * std::cos(sk * x));
        }
        out.eigenfunction.v_prime.front() = 0.0;
        out.eigenfunction.v_prime.back() = 0.0;
        return out;
    }

    const double cap = std::max(10.0 * n * std::abs(K), 10.0 * (kPi / d) * (kPi / d)) * 100.0;
    double lo = 1e-8;
    double hi = lo;
    bool bracketed = neumann_defect(K, n, d, lo) >= 0.0;
    while (!bracketed) {
        hi = lo * 1.05;
        if (hi > cap) {
            throw ConvergenceError("no sign change of the Neumann defect below λ = " +
                                   std::to_string(cap));
        }
        if (neumann_defect(K, n, d, hi) >= 0.0) {
            bracketed = true;
        } else {
            lo = hi;
        }
    }
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (neumann_defect(K, n, d, mid) < 0.0 ? lo : hi) = mid;
    }
    out.lambda1 = 0.5 * (lo + hi);

    // The first eigenfunction is odd: shoot the left half and reflect.
    const ode::Trajectory t =
        ode::integrate(model_rhs(K, n, out.lambda1), -d / 2, {-1.0, 0.0}, 0.0, kTol);
    auto& e = out.eigenfunction;
    const std::size_t m = t.x.size();
    for (std::size_t i = 0; i < m; ++i) {
        e.x.push_back(t.x[i]);
        e.v.push_back(t.y[i][0]);
        e.v_prime.push_back(t.y[i][1]);
    }
    for (std::size_t i = m - 1; i-- > 0;) {
        e.x.push_back(-t.x[i]);
        e.v.push_back(-t.y[i][0]);
        e.v_prime.push_back(t.y[i][1]);
    }
    out.residual = std::abs(t.y.back()[0]);  // |v(0)| against max |v| = 1
    return out;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

namespace {

double symmetric_weight(double K, double n, double x) {
    if (K > 0.0) return std::pow(std::max(0.0, std::cos(std::sqrt(K) * x)), n - 1.0);
    if (K < 0.0) return std::pow(std::cosh(std::sqrt(-K) * x), n - 1.0);
    return 1.0;
}

// Inertia count of the pencil S - x M for the weighted Neumann Laplacian
// S = D^T diag(flux) D, i.e. the number of generalized eigenvalues below x.
// The LDL^T pivots are carried in differential form q_i = flux_i + t_i so that
// small eigenvalues keep full relative accuracy (no cancellation against the
// O(1/h^2) diagonal).
int pencil_inertia(const std::vector<double>& flux, const std::vector<double>& mass, double x) {
    const std::size_t n = mass.size();
    int count = 0;
    double t = -x * mass[0];
    double q = flux[0] + t;
    for (std::size_t i = 0;; ) {
        if (q == 0.0) q = -std::numeric_limits<double>::min();
        if (q < 0.0) ++count;
        if (++i == n) break;
        // q -> 0 sends the next pivot to infinity; t/q -> 1 once both are infinite.
        double ratio = t / q;
        if (std::isnan(ratio)) ratio = 1.0;
        t = -x * mass[i] + flux[i - 1] * ratio;
        q = (i < n - 1 ? flux[i] : 0.0) + t;
    }
    return count;
}

}  // namespace

double sturm_liouville_oracle(double K, double n, double d, int N) {
    check_neumann_inputs(K, n, d);
    if (N < 100) throw DomainError("N must be at least 100");
    if (is_full_sphere(K, d)) d = kPi / std::sqrt(K);

    const double h = d / N;
    const double x0 = -d / 2;
    std::vector<double> stiff_mid(N);
    for (int i = 0; i < N; ++i) stiff_mid[i] = symmetric_weight(K, n, x0 + (i + 0.5) * h) / h;

    // Dual-cell midpoint masses; half cells at the two ends.
    std::vector<double> mass(N + 1);
    for (int i = 1; i < N; ++i) mass[i] = h * symmetric_weight(K, n, x0 + i * h);
    mass[0] = 0.5 * h * symmetric_weight(K, n, x0 + 0.25 * h);
    mass[N] = 0.5 * h * symmetric_weight(K, n, x0 + d - 0.25 * h);

    double upper = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double row = (i > 0 ? stiff_mid[i - 1] : 0.0) + (i < N ? stiff_mid[i] : 0.0);
        upper = std::max(upper, 2.0 * row / mass[i]);
    }

    double lo = 0.0;
    double hi = upper;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (pencil_inertia(stiff_mid, mass, mid) >= 2 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sgap

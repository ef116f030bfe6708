#include "sgap/heat.hpp"

#include "sgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <sstream>

namespace sgap {
namespace {

constexpr double kTruncEps = 1e-10;

kernels::DenseView basis_view(const EigenDecomposition& dec) {
    const auto rows = static_cast<std::size_t>(dec.phis.rows());
    const auto cols = static_cast<std::size_t>(dec.phis.cols());
    return {rows, cols, {dec.phis.data(), rows * cols}};
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

std::span<double> as_span(Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

SpectralHeatKernel wrap(const DiscreteSpace& space, EigenDecomposition dec, double t_min) {
    SpectralHeatKernel k;
    k.decomposition = std::move(dec);
    k.mass = space.mass;
    k.vol = k.decomposition.vol;
    k.t_min = t_min;
    return k;
}

std::vector<double> coefficients(const SpectralHeatKernel& k, const Eigen::VectorXd& f) {
    std::vector<double> c(k.decomposition.count);
    kernels::parallel::analyze(basis_view(k.decomposition), as_span(k.mass), as_span(f), c);
    return c;
}

// u(x, t) from mode coefficients without forming the whole vector.
double point_value(const SpectralHeatKernel& k, const std::vector<double>& c, int x, double t) {
    const auto& dec = k.decomposition;
    double acc = 0.0;
    for (std::size_t j = 0; j < dec.count; ++j) {
        acc += std::exp(-dec.lambdas[j] * t) * c[j] * dec.phis(x, static_cast<Eigen::Index>(j));
    }
    return acc;
}

void require_positive(const Eigen::VectorXd& f) {
    if (!(f.minCoeff() > 0.0)) throw DomainError("initial data must be positive");
}

std::string fmt(double x) {
    std::ostringstream o;
    o.precision(10);
    o << x;
    return o.str();
}

std::optional<CheckOutcome> heat_gate(const DiscreteSpace& space, const char* check) {
    if (space.has_boundary)
        return not_applicable(check, space.name, "space has boundary; the Li–Yau estimate requires ∂M = ∅");
    if (space.K < 0.0)
        return not_applicable(check, space.name, "K < 0; the Li–Yau estimate requires Ric ≥ 0");
    return std::nullopt;
}

}  // namespace

double SpectralHeatKernel::truncation_bound(double t) const {
    const std::size_t J = modes();
    return static_cast<double>(J) * std::exp(-decomposition.lambdas[J] * t);
}

std::optional<std::size_t> truncation_level(const std::vector<double>& lambdas, double t_min,
                                            double eps) {
    for (std::size_t J = 1; J < lambdas.size(); ++J) {
        if (std::exp(-lambdas[J] * t_min) <= eps / static_cast<double>(J)) return J;
    }
    return std::nullopt;
}

SpectralHeatKernel make_heat_kernel(const DiscreteSpace& space, int J, const EigenOptions& options) {
    EigenDecomposition dec = lowest_eigenpairs(space, J, options);
    const double t_min = std::log(static_cast<double>(J) / kTruncEps) / dec.lambdas.back();
    return wrap(space, std::move(dec), t_min);
}

SpectralHeatKernel make_heat_kernel_for(const DiscreteSpace& space, double t_min,
                                        const EigenOptions& options) {
    if (!(t_min > 0.0)) throw DomainError("t_min must be positive");
    const int max_J = static_cast<int>(space.vertex_count()) - 1;
    for (int J = std::min(32, max_J);; J = std::min(2 * J, max_J)) {
        EigenDecomposition dec = lowest_eigenpairs(space, J, options);
        const auto level = truncation_level(dec.lambdas, t_min);
        if (level || J == max_J) {
            // with every mode kept the spectral sum is exact on this space
            const std::size_t keep = (level ? *level : static_cast<std::size_t>(J)) + 1;
            dec.lambdas.resize(keep);
            dec.phis.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(keep));
            dec.count = keep;
            return wrap(space, std::move(dec), t_min);
        }
    }
}

double heat_kernel_value(const SpectralHeatKernel& kernel, double t, int x, int y) {
    if (t < 0.0) throw DomainError("t must be non-negative");
    const auto& dec = kernel.decomposition;
    double acc = 0.0;
    // smallest terms first
    for (std::size_t j = dec.count - 1; j >= 1; --j) {
        const auto col = static_cast<Eigen::Index>(j);
        acc += std::exp(-dec.lambdas[j] * t) * (dec.phis(x, col) * dec.phis(y, col));
    }
    return 1.0 / kernel.vol + acc;
}

Eigen::VectorXd heat_kernel_row(const SpectralHeatKernel& kernel, double t, int y) {
    const auto& dec = kernel.decomposition;
    std::vector<double> coeff(dec.count);
    std::vector<double> weights(dec.count);
    for (std::size_t j = 0; j < dec.count; ++j) {
        coeff[j] = dec.phis(y, static_cast<Eigen::Index>(j));
        weights[j] = std::exp(-dec.lambdas[j] * t);
    }
    Eigen::VectorXd out(dec.phis.rows());
    kernels::parallel::synthesize(basis_view(dec), coeff, weights, as_span(out));
    return out;
}

HeatSolution evolve(const SpectralHeatKernel& kernel, const Eigen::VectorXd& f, double t) {
    const auto& dec = kernel.decomposition;
    if (f.size() != dec.phis.rows()) throw DomainError("vertex function has the wrong length");
    if (t < 0.0) throw DomainError("t must be non-negative");

    HeatSolution s;
    s.t = t;
    s.coefficients = coefficients(kernel, f);

    std::vector<double> decay(dec.count);
    std::vector<double> rate(dec.count);
    for (std::size_t j = 0; j < dec.count; ++j) {
        decay[j] = std::exp(-dec.lambdas[j] * t);
        rate[j] = -dec.lambdas[j] * decay[j];
    }
    const auto basis = basis_view(dec);
    s.u.resize(f.size());
    s.du_dt.resize(f.size());
    kernels::parallel::synthesize(basis, s.coefficients, decay, as_span(s.u));
    kernels::parallel::synthesize(basis, s.coefficients, rate, as_span(s.du_dt));

    Eigen::VectorXd projected(f.size());
    kernels::parallel::synthesize(basis, s.coefficients, {}, as_span(projected));
    const double fn = std::sqrt(f.cwiseAbs2().dot(kernel.mass));
    s.projection_residual =
        fn > 0.0 ? std::sqrt((f - projected).cwiseAbs2().dot(kernel.mass)) / fn : 0.0;
    s.truncated = t < kernel.t_min && s.projection_residual > kTruncEps;
    return s;
}

Eigen::VectorXd li_yau_quantity(const DiscreteSpace& space, const SpectralHeatKernel& kernel,
                                const Eigen::VectorXd& f, double t) {
    const HeatSolution s = evolve(kernel, f, t);
    Eigen::Index at;
    const double umin = s.u.minCoeff(&at);
    if (!(umin > 0.0)) {
        throw PositivityError("u(·, " + fmt(t) + ") = " + fmt(umin) + " at vertex " +
                              std::to_string(at) + "; increase the mode count or t");
    }
    const Eigen::VectorXd grad = discrete_gradient_norm(space, s.u.array().log().matrix());
    return grad.cwiseAbs2() - s.du_dt.cwiseQuotient(s.u);
}

CheckOutcome check_li_yau(const DiscreteSpace& space, const SpectralHeatKernel& kernel,
                          const Eigen::VectorXd& f, const std::vector<double>& t_grid) {
    if (auto gate = heat_gate(space, "li_yau")) return *gate;
    require_positive(f);
    if (t_grid.empty()) throw DomainError("empty time grid");

    CheckOutcome c;
    c.check_name = "li_yau";
    c.space_name = space.name;
    c.orientation = Orientation::AtMost;
    c.rhs = 1.0;
    c.slack_used = space.budget.li_yau;
    c.lhs = -std::numeric_limits<double>::infinity();
    double worst_t = t_grid.front();
    bool flagged = false;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw DomainError("times must be positive");
        const Eigen::VectorXd Q = li_yau_quantity(space, kernel, f, t);
        Eigen::Index at;
        const double scaled = Q.maxCoeff(&at) * 2.0 * t / space.n_dim;
        if (scaled > c.lhs) {
            c.lhs = scaled;
            c.detail = {static_cast<long>(at), scaled - 1.0};
            worst_t = t;
        }
        flagged = flagged || evolve(kernel, f, t).truncated;
    }
    c.note = "worst t = " + fmt(worst_t);
    if (flagged) c.note += "; some t below t_min with unresolved data";
    settle(c);
    return c;
}

std::vector<HarnackPair> random_pairs(const DiscreteSpace& space, std::size_t count, double t_lo,
                                      double t_hi, std::uint64_t seed) {
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw DomainError("need 0 < t_lo < t_hi");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> vertex(0, static_cast<int>(space.vertex_count()) - 1);
    std::uniform_real_distribution<double> time(t_lo, t_hi);
    std::vector<HarnackPair> out;
    out.reserve(count);
    while (out.size() < count) {
        const int x1 = vertex(rng);
        const int x2 = vertex(rng);
        double t1 = time(rng);
        double t2 = time(rng);
        if (t1 == t2) continue;
        if (t1 > t2) std::swap(t1, t2);
        out.push_back({x1, t1, x2, t2});
    }
    return out;
}

CheckOutcome check_harnack(const DiscreteSpace& space, const SpectralHeatKernel& kernel,
                           const Eigen::VectorXd& f, const std::vector<HarnackPair>& pairs) {
    if (auto gate = heat_gate(space, "harnack")) return *gate;
    require_positive(f);
    if (pairs.empty()) throw DomainError("no Harnack pairs");

    const std::vector<double> c = coefficients(kernel, f);
    const double n = space.n_dim;
    CheckOutcome out;
    out.check_name = "harnack";
    out.space_name = space.name;
    out.orientation = Orientation::AtMost;
    out.rhs = 1.0;
    out.slack_used = space.budget.harnack;
    out.lhs = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        if (!(p.t1 > 0.0 && p.t2 > p.t1)) throw DomainError("Harnack pairs need 0 < t1 < t2");
        const double u1 = point_value(kernel, c, p.x1, p.t1);
        const double u2 = point_value(kernel, c, p.x2, p.t2);
        if (!(u2 > 0.0)) throw PositivityError("u(x2, t2) ≤ 0 in Harnack pair " + std::to_string(i));
        const double d = space.distance(p.x1, p.x2);
        // in logs: the exponential factor overflows for short time gaps
        const double log_bound = std::log(u2) + 0.5 * n * std::log(p.t2 / p.t1) +
                                 d * d / (4.0 * (p.t2 - p.t1));
        const double ratio = std::exp(std::min(std::log(std::max(u1, 1e-300)) - log_bound, 700.0));
        if (ratio > out.lhs) {
            out.lhs = ratio;
            out.detail = {static_cast<long>(i), ratio - 1.0};
        }
    }
    settle(out);
    return out;
}

std::vector<double> log_grid(double a, double b, int n) {
    if (!(a > 0.0 && b >= a) || n < 1) throw DomainError("log grid needs 0 < a <= b and n >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = a;
        return out;
    }
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

}  // namespace sgap

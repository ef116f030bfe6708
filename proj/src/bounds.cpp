#include "sgap/bounds.hpp"

#include "sgap/errors.hpp"
#include "sgap/model_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sgap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSClip = 1e-9;

void check_common(int n, double d) {
    if (n < 2) throw DomainError("n must be at least 2");
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("d must be positive");
}

}  // namespace

std::optional<double> lichnerowicz_bound(int n, double K) {
    if (!(K > 0.0)) return std::nullopt;
    return n * K;
}

double zhong_yang_bound(double d) {
    if (!(d > 0.0)) throw DomainError("d must be positive");
    return kPi * kPi / (d * d);
}

std::pair<double, double> chen_wang_positive_bounds(int n, double d) {
    check_common(n, d);
    if (d > kPi * (1.0 + 1e-12)) throw DomainError("d exceeds π/√K");
    const double first = n / (1.0 - std::pow(std::cos(d / 2.0), n));
    const double second =
        kPi * kPi / (d * d) + (n - 1) * std::max(kPi / (4.0 * n), 1.0 - 2.0 / kPi);
    return {first, second};
}

std::pair<double, double> chen_wang_negative_bounds(int n, double d) {
    check_common(n, d);
    const double base = kPi * kPi / (d * d);
    const double first = base * std::pow(std::cosh(d / 2.0), 1.0 - n) *
                         std::sqrt(1.0 + 2.0 * (n - 1) * d * d / std::pow(kPi, 4));
    const double second = base - (n - 1) * (kPi / 2.0 - 1.0);
    return {first, second};
}

double qzz_bound(double K, int n, double d, double s) {
    check_common(n, d);
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    return 4.0 * s * (1.0 - s) * kPi * kPi / (d * d) + s * (n - 1) * K;
}

QzzOptimum qzz_optimal(double K, int n, double d) {
    check_common(n, d);
    const double A = kPi * kPi / (d * d);
    const double B = (n - 1) * K;
    const double s = std::clamp((4.0 * A + B) / (8.0 * A), kSClip, 1.0 - kSClip);
    return {s, 4.0 * s * (1.0 - s) * A + s * B};
}

const BoundEntry* BoundReport::find(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

BoundReport best_lower_bound(double K, int n, double d, bool include_model,
                             std::optional<double> s) {
    check_common(n, d);
    if (!std::isfinite(K)) throw DomainError("K must be finite");
    if (K > 0.0 && d > kPi / std::sqrt(K) * (1.0 + 1e-12)) throw DomainError("d exceeds π/√K");

    BoundReport report;
    report.K = K;
    report.n = n;
    report.d = d;
    auto add = [&report](std::string name, double value, bool applicable,
                         BoundKind kind = BoundKind::ClosedForm) {
        report.entries.push_back({std::move(name), applicable ? value : 0.0, applicable, kind});
    };

    const double A = kPi * kPi / (d * d);
    const double B = (n - 1) * K;

    const auto lich = lichnerowicz_bound(n, K);
    add("lichnerowicz", lich.value_or(0.0), lich.has_value());
    add("zhong_yang", A, K >= 0.0);

    if (K > 0.0) {
        const double scaled = std::min(d * std::sqrt(K), kPi);
        const auto [p1, p2] = chen_wang_positive_bounds(n, scaled);
        add("chen_wang_positive_1", K * p1, true);
        add("chen_wang_positive_2", K * p2, true);
    } else {
        add("chen_wang_positive_1", 0.0, false);
        add("chen_wang_positive_2", 0.0, false);
    }
    if (K < 0.0) {
        const auto [q1, q2] = chen_wang_negative_bounds(n, d * std::sqrt(-K));
        add("chen_wang_negative_1", -K * q1, true);
        add("chen_wang_negative_2", -K * q2, true);
    } else {
        add("chen_wang_negative_1", 0.0, false);
        add("chen_wang_negative_2", 0.0, false);
    }

    add("qzz_half", A + B / 2.0, true);
    add("qzz_three_quarters", 0.75 * (A + B), K > 0.0);
    add("qzz_quadratic", A + B / 2.0 + B * B / (16.0 * A), K > 0.0 && n <= 5);
    add("qzz_optimal", qzz_optimal(K, n, d).value, true);
    if (s) add("qzz_s", qzz_bound(K, n, d, *s), true);
    add("li_conjecture", A + B, K > 0.0, BoundKind::Reference);

    if (include_model) {
        const double model = neumann_lambda1(K, n, d).lambda1;
        for (const auto& e : report.entries) {
            if (e.applicable && e.kind == BoundKind::ClosedForm && e.value > model + 1e-8) {
                std::ostringstream msg;
                msg << "closed form " << e.name << " = " << e.value
                    << " exceeds the model value " << model;
                throw ConvergenceError(msg.str());
            }
        }
        add("model", model, true, BoundKind::Model);
    }

    bool have_best = false;
    for (const auto& e : report.entries) {
        if (!e.applicable || e.kind == BoundKind::Reference) continue;
        // The model value wins ties: it is the sharp one.
        const bool model_tie = e.kind == BoundKind::Model &&
                               e.value >= report.best.value * (1.0 - 1e-8);
        if (!have_best || e.value > report.best.value || model_tie) {
            report.best = e;
            have_best = true;
        }
    }
    return report;
}

}  // namespace sgap

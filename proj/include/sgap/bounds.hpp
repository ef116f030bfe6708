#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sgap {

// Closed-form lower bounds for the first nonzero eigenvalue of a compact
// n-dimensional space without boundary with Ric >= (n-1) K and diameter d.
// The Chen-Wang forms are stated for K in {-1, 1}; other K are reached by
// rescaling the metric (distances by sqrt|K|, eigenvalues by |K|).

/// n K for K > 0; nullopt otherwise.
std::optional<double> lichnerowicz_bound(int n, double K);

/// pi^2 / d^2.
double zhong_yang_bound(double d);

/// K = 1 forms: n / (1 - cos^n(d/2)) and pi^2/d^2 + (n-1) max{pi/(4n), 1 - 2/pi}.
/// Requires n >= 2 and 0 < d <= pi.
std::pair<double, double> chen_wang_positive_bounds(int n, double d);

/// K = -1 forms: pi^2/d^2 cosh^{1-n}(d/2) sqrt(1 + 2(n-1)d^2/pi^4) and
/// pi^2/d^2 - (n-1)(pi/2 - 1).
std::pair<double, double> chen_wang_negative_bounds(int n, double d);

/// 4 s (1-s) pi^2/d^2 + s (n-1) K for s in (0, 1).
double qzz_bound(double K, int n, double d, double s);

struct QzzOptimum {
    double s_star;
    double value;
};

/// Maximizer of qzz_bound over s, clipped to [1e-9, 1 - 1e-9].
QzzOptimum qzz_optimal(double K, int n, double d);

enum class BoundKind {
    ClosedForm,
    Model,      // numerical lambda1(K, n, d)
    Reference,  // conjectural; reported, never used in best
};

struct BoundEntry {
    std::string name;
    double value = 0.0;
    bool applicable = false;
    BoundKind kind = BoundKind::ClosedForm;
};

struct BoundReport {
    double K = 0.0;
    int n = 0;
    double d = 0.0;
    std::vector<BoundEntry> entries;
    BoundEntry best;

    const BoundEntry* find(const std::string& name) const;
};

/// Evaluates every applicable closed form (and optionally the model value) and
/// picks the largest. With the model included, throws ConvergenceError if any
/// closed form exceeds the model value by more than 1e-8.
BoundReport best_lower_bound(double K, int n, double d, bool include_model,
                             std::optional<double> s = std::nullopt);

}  // namespace sgap

#include "sgap/ode_integrator.hpp"

#include "sgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

namespace sgap::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [coef, k] : terms) {
        out[0] += h * coef * (*k)[0];
        out[1] += h * coef * (*k)[1];
    }
    return out;
}

struct StepResult {
    State y;
    State k7;
    State err;
};

StepResult dopri_step(const Rhs& rhs, double x, const State& y, const State& k1, double h) {
    const State k2 = rhs(x + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = rhs(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = rhs(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 =
        rhs(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = rhs(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                            {a65, &k5}}));
    const State y5 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(x + h, y5);
    State err{};
    for (int i = 0; i < 2; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                      e7 * k7[i]);
    }
    return {y5, k7, err};
}

bool finite(const State& s) { return std::isfinite(s[0]) && std::isfinite(s[1]); }

}  // namespace

Trajectory integrate(const Rhs& rhs, double x0, const State& y0, double x_end,
                     const Tolerance& tol, double initial_step, std::size_t max_steps) {
    Trajectory traj;
    traj.x.push_back(x0);
    traj.y.push_back(y0);
    const double span = x_end - x0;
    if (span == 0.0) return traj;
    const double dir = span > 0 ? 1.0 : -1.0;

    double h = initial_step > 0 ? initial_step : std::abs(span) * 1e-3;
    h = std::min(h, std::abs(span)) * dir;

    double x = x0;
    State y = y0;
    State k1 = rhs(x, y);
    for (std::size_t step = 0; step < max_steps; ++step) {
        const bool last = dir * (x + h - x_end) >= 0.0;
        if (last) h = x_end - x;

        const StepResult r = dopri_step(rhs, x, y, k1, h);
        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double scale =
                tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(r.y[i]));
            err = std::max(err, std::abs(r.err[i]) / scale);
        }
        if (!finite(r.y) || !std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            x = last ? x_end : x + h;
            y = r.y;
            k1 = r.k7;
            traj.x.push_back(x);
            traj.y.push_back(y);
            if (last) return traj;
        }
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= err <= 1.0 ? factor : std::min(factor, 1.0);
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x))) {
            throw ConvergenceError("step size underflow at x = " + std::to_string(x));
        }
    }
    throw ConvergenceError("integrator exceeded " + std::to_string(max_steps) + " steps");
}

State single_step(const Rhs& rhs, double x0, const State& y0, double x1) {
    if (x1 == x0) return y0;
    return dopri_step(rhs, x0, y0, rhs(x0, y0), x1 - x0).y;
}

}  // namespace sgap::ode

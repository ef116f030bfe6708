#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace sgap::ode {

/// (v, v') pairs; every model problem in this library is a scalar second-order ODE.
using State = std::array<double, 2>;
using Rhs = std::function<State(double x, const State& y)>;

struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-10;
};

struct Trajectory {
    std::vector<double> x;
    std::vector<State> y;
};

/// Adaptive Dormand-Prince 5(4) integration from x0 to x_end (either direction).
/// Every accepted step is recorded. Throws ConvergenceError when the step size
/// underflows or max_steps is exceeded.
Trajectory integrate(const Rhs& rhs, double x0, const State& y0, double x_end,
                     const Tolerance& tol = {}, double initial_step = 0.0,
                     std::size_t max_steps = 2'000'000);

/// One Dormand-Prince step of size (x1 - x0) returning the 5th-order solution.
/// Used for dense evaluation between recorded nodes: the sub-step is never longer
/// than the accepted step, so its local error stays below the integration tolerance.
State single_step(const Rhs& rhs, double x0, const State& y0, double x1);

}  // namespace sgap::ode

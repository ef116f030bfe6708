#include "sgap/errors.hpp"
#include "sgap/model_ode.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace sgap;

namespace {

constexpr double kPi = std::numbers::pi;

// Classical RK4 with a fixed step, kept independent of the adaptive integrator.
double rk4_value(double K, double l, double lambda, double x0, double x1, int steps) {
    auto rhs = [&](double x, double v, double w, double& dv, double& dw) {
        dv = w;
        dw = (l - 1.0) * drift_coefficient(K, x) * w - lambda * v;
    };
    const double h = (x1 - x0) / steps;
    double v = -1.0, w = 0.0, x = x0;
    for (int i = 0; i < steps; ++i) {
        double k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w;
        rhs(x, v, w, k1v, k1w);
        rhs(x + h / 2, v + h / 2 * k1v, w + h / 2 * k1w, k2v, k2w);
        rhs(x + h / 2, v + h / 2 * k2v, w + h / 2 * k2w, k3v, k3w);
        rhs(x + h, v + h * k3v, w + h * k3w, k4v, k4w);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
        x = x0 + (i + 1) * h;
    }
    return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(ModelParams, RejectsLAtMostOne) {
    EXPECT_THROW(ModelParams(1.0, 1.0), DomainError);
    EXPECT_THROW(ModelParams(1.0, 0.5), DomainError);
    EXPECT_THROW(ModelParams(NAN, 2.0), DomainError);
    EXPECT_DOUBLE_EQ(ModelParams(2.0, 3.0).K(), 1.0);
    EXPECT_DOUBLE_EQ(ModelParams::from_curvature(-2.0, 3.0).R(), -4.0);
}

TEST(Drift, FixedValues) {
    EXPECT_EQ(drift_coefficient(0.0, 0.7), 0.0);
    EXPECT_NEAR(drift_coefficient(1.0, kPi / 4), 1.0, 1e-15);
    EXPECT_EQ(drift_coefficient(-1.0, 0.0), 0.0);
    EXPECT_NEAR(drift_coefficient(-4.0, 0.3), -2.0 * std::tanh(0.6), 1e-15);
    EXPECT_THROW(drift_coefficient(1.0, kPi / 2), DomainError);
}

TEST(Density, FixedValues) {
    EXPECT_DOUBLE_EQ(density(ModelParams(1.0, 2.0), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(density(ModelParams(0.0, 3.0), 2.0), 4.0);
    EXPECT_NEAR(density(ModelParams(-1.0, 2.0), 1.0), 1.1752011936438014, 1e-15);
}

TEST(Density, LogDerivativeMatchesDrift) {
    for (double l : {2.0, 3.5, 6.0}) {
        for (double K : {0.25, 1.0, 3.0}) {
            const ModelParams p = ModelParams::from_curvature(K, l);
            const double half = kPi / (2 * std::sqrt(K));
            for (int i = -36; i <= 36; ++i) {
                const double x = half * i / 40.0;
                auto D = [&](double h) {
                    return (std::log(density(p, x + h)) - std::log(density(p, x - h))) / (2 * h);
                };
                // two Richardson levels on the central difference of log rho
                const double h = 2e-2 * (half - std::abs(x));
                const double r1 = (4 * D(h / 2) - D(h)) / 3;
                const double r2 = (4 * D(h / 4) - D(h / 2)) / 3;
                const double dlog = (16 * r2 - r1) / 15;
                EXPECT_LE(std::abs(dlog + (l - 1) * drift_coefficient(K, x)), 1e-10)
                    << "K=" << K << " l=" << l << " x=" << x;
            }
        }
    }
}

TEST(ModelIvp, SineSolutionOnPositiveCurvature) {
    for (double n : {2.0, 3.0, 5.0, 7.5}) {
        const IvpSolution sol = solve_model_ivp(ModelParams(n - 1, n), n, kPi / 2);
        EXPECT_NEAR(sol.a(), -kPi / 2, 1e-15);
        for (double x : {-1.5, -1.0, -0.2, 0.0, 0.9, 1.4, 1.57}) {
            const auto s = sol.evaluate(x);
            EXPECT_NEAR(s[0], std::sin(x), 1e-8) << "n=" << n << " x=" << x;
            EXPECT_NEAR(s[1], std::cos(x), 1e-7) << "n=" << n << " x=" << x;
        }
    }
}

TEST(ModelIvp, FlatCaseIsMinusCosine) {
    const IvpSolution sol = solve_model_ivp(ModelParams(0.0, 4.0), 4.0, 2.0);
    EXPECT_EQ(sol.a(), 0.0);
    for (double x = 0.0; x <= 2.0; x += 0.125) {
        EXPECT_NEAR(sol.evaluate(x)[0], -std::cos(2 * x), 1e-9);
    }
}

TEST(ModelIvp, NegativeCurvatureAgreesWithRk4Reference) {
    const IvpSolution sol = solve_model_ivp(ModelParams(-1.0, 2.0), 5.0, 1.0);
    const double coarse = rk4_value(-1.0, 2.0, 5.0, 0.0, 1.0, 1000);
    const double fine = rk4_value(-1.0, 2.0, 5.0, 0.0, 1.0, 10000);
    ASSERT_NEAR(coarse, fine, 1e-10);  // the reference itself has converged
    EXPECT_NEAR(sol.evaluate(1.0)[0], fine, 1e-8);
}

TEST(ModelIvp, SingularStartCurvatureByRichardson) {
    for (double l : {2.0, 3.0, 4.5}) {
        for (double lambda : {1.0, 2.5, 6.0}) {
            const ModelParams p(l - 1.0, l);
            const IvpSolution sol = solve_model_ivp(p, lambda, 0.0);
            const double h = 1e-3;
            auto g = [&](double s) { return (sol.evaluate(sol.a() + s)[0] + 1.0) / (s * s); };
            const double extrapolated = (4 * g(h / 2) - g(h)) / 3;
            EXPECT_NEAR(extrapolated, lambda / (2 * l), 1e-8) << "l=" << l << " lambda=" << lambda;
        }
    }
}

TEST(ModelExtremum, SphereModel) {
    for (int n : {2, 3, 4, 6}) {
        const IvpSolution sol = model_extremum(ModelParams(n - 1, n), n);
        EXPECT_NEAR(*sol.b, kPi / 2, 1e-8);
        EXPECT_NEAR(*sol.m, 1.0, 1e-8);
    }
}

TEST(ModelExtremum, FlatModel) {
    for (double lambda : {0.5, 4.0, 9.0}) {
        const IvpSolution sol = model_extremum(ModelParams(0.0, 3.0), lambda);
        EXPECT_NEAR(*sol.b, kPi / std::sqrt(lambda), 1e-8);
        EXPECT_NEAR(*sol.m, 1.0, 1e-8);
    }
}

TEST(ModelExtremum, NegativeCurvatureMaximumBelowOne) {
    const IvpSolution sol = model_extremum(ModelParams(-1.0, 3.0), 4.0);
    EXPECT_LT(*sol.m, 1.0 - 1e-6);
    EXPECT_GT(*sol.m, 0.0);
    EXPECT_NEAR(sol.evaluate(*sol.b)[1], 0.0, 1e-8);
}

TEST(NeumannLambda1, FixedValues) {
    EXPECT_NEAR(neumann_lambda1(1.0, 2.0, kPi).lambda1, 2.0, 1e-12);
    for (double n : {2.0, 3.0, 5.0}) {
        EXPECT_LE(rel(neumann_lambda1(0.0, n, 1.7).lambda1, kPi * kPi / (1.7 * 1.7)), 1e-8);
    }
    EXPECT_GE(neumann_lambda1(-1.0, 2.0, 1.0).lambda1, kPi * kPi - (kPi / 2 - 1));
    EXPECT_THROW(neumann_lambda1(1.0, 2.0, 3.2), DomainError);
}

TEST(NeumannLambda1, AgreesWithFiniteDifferences) {
    EXPECT_LE(rel(sturm_liouville_oracle(0.0, 3.0, 2.0, 2000), kPi * kPi / 4), 1e-5);
    EXPECT_LE(rel(sturm_liouville_oracle(1.0, 2.0, kPi, 2000), 2.0), 1e-4);
    const double shot = neumann_lambda1(-1.0, 4.0, 0.5).lambda1;
    EXPECT_LE(rel(sturm_liouville_oracle(-1.0, 4.0, 0.5, 4000), shot), 1e-6);
}

namespace {
struct GridPoint {
    double K, n, d;
};

std::vector<GridPoint> parameter_grid() {
    std::vector<GridPoint> out;
    for (double K : {-2.0, -1.0, 0.0, 0.5, 1.0})
        for (double n : {2.0, 3.0, 5.0, 10.0})
            for (double d : {0.5, 1.0, 2.0, K > 0 ? std::min(kPi / std::sqrt(K), 3.0) : 3.0})
                out.push_back({K, n, d});
    return out;
}
}  // namespace

TEST(NeumannLambda1, EigenfunctionIsIncreasing) {
    for (const auto& g : parameter_grid()) {
        const auto r = neumann_lambda1(g.K, g.n, g.d);
        const auto& e = r.eigenfunction;
        ASSERT_GT(e.x.size(), 4u);
        for (std::size_t i = 1; i + 1 < e.x.size(); ++i) {
            ASSERT_GT(e.v_prime[i], 0.0) << "K=" << g.K << " n=" << g.n << " d=" << g.d << " x=" << e.x[i];
        }
        EXPECT_LT(r.residual, 1e-6);
    }
}

TEST(NeumannLambda1, DecreasesWithDiameter) {
    for (double K : {-2.0, -1.0, 0.0, 0.5, 1.0}) {
        for (double n : {2.0, 3.0, 5.0, 10.0}) {
            double prev = INFINITY;
            for (double d : {0.5, 1.0, 2.0, 3.0}) {
                const double lam = neumann_lambda1(K, n, d).lambda1;
                EXPECT_LE(lam, prev + 1e-8) << "K=" << K << " n=" << n << " d=" << d;
                prev = lam;
            }
        }
    }
}

TEST(NeumannLambda1, RealDimensionAccepted) {
    const double a = neumann_lambda1(0.7, 2.5, 1.5).lambda1;
    const double b = sturm_liouville_oracle(0.7, 2.5, 1.5, 8000);
    EXPECT_LE(rel(a, b), 1e-5);
}

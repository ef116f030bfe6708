#include "sgap/bounds.hpp"
#include "sgap/errors.hpp"
#include "sgap/model_ode.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sgap;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

// 40-digit mpmath evaluations of the closed forms, rounded to double.
constexpr double kCwPos1_n3_halfpi = 4.64075448203408147;
constexpr double kCwPos2_n2_pi = 1.39269908169872415;
constexpr double kCwPos2_n3_halfpi = 4.72676045526483731;
constexpr double kCwNeg1_n2_d1 = 8.84194855673197849;
constexpr double kCwNeg2_n2_d1 = 9.29880807429446200;
constexpr double kQzz_m1_3_2_03 = 1.47261692422876531;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST(Lichnerowicz, Values) {
    EXPECT_EQ(lichnerowicz_bound(2, 1.0), 2.0);
    EXPECT_FALSE(lichnerowicz_bound(5, 0.0).has_value());
    EXPECT_FALSE(lichnerowicz_bound(5, -1.0).has_value());
    EXPECT_EQ(lichnerowicz_bound(3, 4.0), 12.0);
}

TEST(ZhongYang, Values) {
    EXPECT_DOUBLE_EQ(zhong_yang_bound(kPi), 1.0);
    EXPECT_DOUBLE_EQ(zhong_yang_bound(1.0), kPi2);
    EXPECT_DOUBLE_EQ(zhong_yang_bound(2.0), kPi2 / 4);
}

TEST(ChenWangPositive, Values) {
    const auto [a, b] = chen_wang_positive_bounds(2, kPi);
    EXPECT_NEAR(a, 2.0, 1e-14);
    EXPECT_NEAR(b, kCwPos2_n2_pi, 1e-14);
    // pi/8 wins over 1 - 2/pi here
    EXPECT_GT(kPi / 8, 1 - 2 / kPi);
    const auto [c, e] = chen_wang_positive_bounds(3, kPi / 2);
    EXPECT_NEAR(c, kCwPos1_n3_halfpi, 1e-13);
    EXPECT_NEAR(e, kCwPos2_n3_halfpi, 1e-13);
    EXPECT_THROW(chen_wang_positive_bounds(2, 3.2), DomainError);
}

TEST(ChenWangNegative, Values) {
    const auto [a, b] = chen_wang_negative_bounds(2, 1.0);
    EXPECT_NEAR(a, kCwNeg1_n2_d1, 1e-13);
    EXPECT_NEAR(b, kCwNeg2_n2_d1, 1e-13);
}

TEST(ChenWangNegative, SmallDiameterApproachesZhongYang) {
    const double d = 1e-3;
    const auto [a, b] = chen_wang_negative_bounds(2, d);
    EXPECT_LT(rel(a, kPi2 / (d * d)), 1e-2);
    EXPECT_LT(rel(b, kPi2 / (d * d)), 1e-2);
}

TEST(Qzz, Values) {
    EXPECT_DOUBLE_EQ(qzz_bound(0.0, 4, 1.3, 0.5), kPi2 / (1.3 * 1.3));
    EXPECT_NEAR(qzz_bound(1.0, 2, kPi, 0.5), 1.5, 1e-15);
    EXPECT_NEAR(qzz_bound(-1.0, 3, 2.0, 0.3), kQzz_m1_3_2_03, 1e-14);
    EXPECT_THROW(qzz_bound(1.0, 2, 1.0, 1.0), DomainError);
}

TEST(Qzz, HalfIsArithmeticMean) {
    for (double K : {-2.0, -0.5, 0.0, 0.3, 1.0})
        for (int n : {2, 3, 7})
            for (double d : {0.4, 1.0, 2.5})
                EXPECT_NEAR(qzz_bound(K, n, d, 0.5), kPi2 / (d * d) + (n - 1) * K / 2,
                            1e-15 * (1 + kPi2 / (d * d)));
}

TEST(QzzOptimal, Values) {
    const auto flat = qzz_optimal(0.0, 3, 1.1);
    EXPECT_DOUBLE_EQ(flat.s_star, 0.5);
    EXPECT_NEAR(flat.value, kPi2 / 1.21, 1e-13);
    const auto sphere = qzz_optimal(1.0, 2, kPi);
    EXPECT_NEAR(sphere.s_star, 5.0 / 8, 1e-15);
    EXPECT_NEAR(sphere.value, 1.5625, 1e-14);
    EXPECT_GE(sphere.value, 0.75 * (1 + 1));
}

TEST(QzzOptimal, DominatesRandomS) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> s(0.0, 1.0);
    for (double K : {-2.0, -1.0, 0.0, 0.5, 1.0, 4.0})
        for (int n : {2, 3, 5})
            for (double d : {0.5, 1.0, 1.5}) {
                const double best = qzz_optimal(K, n, d).value;
                for (int i = 0; i < 100; ++i) {
                    double si = s(rng);
                    if (si <= 0.0) continue;
                    EXPECT_GE(best, qzz_bound(K, n, d, si) - 1e-12 * std::abs(best));
                }
            }
}

TEST(BestLowerBound, SphereWithModel) {
    const BoundReport r = best_lower_bound(1.0, 2, kPi, true);
    EXPECT_EQ(r.best.name, "model");
    EXPECT_NEAR(r.best.value, 2.0, 1e-8);
    EXPECT_NEAR(r.find("chen_wang_positive_1")->value, 2.0, 1e-12);
    EXPECT_NEAR(r.find("qzz_optimal")->value, 1.5625, 1e-12);
    const BoundEntry* li = r.find("li_conjecture");
    ASSERT_NE(li, nullptr);
    EXPECT_EQ(li->kind, BoundKind::Reference);
}

TEST(BestLowerBound, FlatModelEqualsZhongYang) {
    const BoundReport r = best_lower_bound(0.0, 3, 1.0, true);
    EXPECT_NEAR(r.best.value, kPi2, 1e-8 * kPi2);
    EXPECT_NEAR(r.find("model")->value, r.find("zhong_yang")->value, 1e-8 * kPi2);
}

TEST(BestLowerBound, NegativeModelAboveClosedForm) {
    const BoundReport r = best_lower_bound(-1.0, 2, 1.0, true);
    EXPECT_GE(r.find("model")->value, kCwNeg2_n2_d1);
}

TEST(BestLowerBound, InapplicableEntriesAreFlagged) {
    const BoundReport r = best_lower_bound(-1.0, 3, 2.0, false);
    EXPECT_FALSE(r.find("lichnerowicz")->applicable);
    EXPECT_FALSE(r.find("chen_wang_positive_1")->applicable);
    EXPECT_TRUE(r.find("chen_wang_negative_2")->applicable);
    EXPECT_EQ(r.find("model"), nullptr);
    for (const auto& e : r.entries)
        if (e.applicable && e.kind == BoundKind::ClosedForm) EXPECT_LE(e.value, r.best.value);
}

TEST(BestLowerBound, RejectsDiameterBeyondPiOverSqrtK) {
    try {
        best_lower_bound(1.0, 2, 4.0, false);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("d exceeds π/√K"), std::string::npos);
    }
}

TEST(BestLowerBound, ScalingCovariance) {
    for (double K : {-1.0, 0.0, 0.5, 1.0})
        for (int n : {2, 3, 5})
            for (double d : {0.5, 1.0, 2.0})
                for (double c : {2.0, 1.0 / 3}) {
                    const double base = best_lower_bound(K, n, d, false).best.value;
                    const double scaled = best_lower_bound(c * c * K, n, d / c, false).best.value;
                    EXPECT_LE(rel(scaled, c * c * base), 1e-9) << K << " " << n << " " << d << " " << c;
                }
}

TEST(BestLowerBound, ModelDominatesEveryClosedForm) {
    for (double K : {-2.0, -1.0, 0.0, 0.5, 1.0})
        for (int n : {2, 3, 5, 10})
            for (double d : {0.5, 1.0, 2.0, K > 0 ? std::min(kPi / std::sqrt(K), 3.0) : 3.0}) {
                const BoundReport r = best_lower_bound(K, n, d, true);
                const double model = r.find("model")->value;
                for (const auto& e : r.entries)
                    if (e.applicable && e.kind == BoundKind::ClosedForm)
                        EXPECT_GE(model, e.value - 1e-8) << e.name << " K=" << K << " n=" << n << " d=" << d;
            }
}

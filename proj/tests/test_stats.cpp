#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "loe/error.hpp"
#include "loe/stats.hpp"
#include "oracles.hpp"

using namespace loe;

TEST(StudentT, ClosedFormsForOneAndTwoDegrees) {
    for (double t : {-5.0, -1.3, -0.2, 0.0, 0.7, 2.0, 30.0}) {
        EXPECT_NEAR(student_t_cdf(t, 1.0), 0.5 + std::atan(t) / M_PI, 1e-12) << t;
        EXPECT_NEAR(student_t_cdf(t, 2.0), 0.5 + t / (2.0 * std::sqrt(2.0 + t * t)), 1e-12) << t;
    }
}

TEST(StudentT, MatchesNumericalIntegration) {
    for (double df : {3.0, 5.5, 10.0, 29.0, 100.0}) {
        for (double t : {-4.0, -2.0, -0.5, 0.3, 1.0, 2.5, 6.0}) {
            EXPECT_NEAR(student_t_cdf(t, df), oracle::t_cdf_by_integration(t, df), 1e-9) << df << " " << t;
        }
    }
}

TEST(StudentT, TextbookCriticalValues) {
    EXPECT_NEAR(2 * (1 - student_t_cdf(2.228, 10)), 0.05, 1e-3);
    EXPECT_NEAR(2 * (1 - student_t_cdf(2.093, 19)), 0.05, 1e-3);
    EXPECT_DOUBLE_EQ(student_t_cdf(INFINITY, 4), 1.0);
    EXPECT_DOUBLE_EQ(student_t_cdf(-INFINITY, 4), 0.0);
    EXPECT_THROW(student_t_cdf(1.0, 0.0), InvalidArgument);
}

TEST(IncompleteBeta, EdgesAndSymmetry) {
    EXPECT_DOUBLE_EQ(regularized_incomplete_beta(0.0, 2, 3), 0.0);
    EXPECT_DOUBLE_EQ(regularized_incomplete_beta(1.0, 2, 3), 1.0);
    // I_x(1, 1) = x and I_x(a, 1) = x^a
    EXPECT_NEAR(regularized_incomplete_beta(0.3, 1, 1), 0.3, 1e-14);
    EXPECT_NEAR(regularized_incomplete_beta(0.6, 3, 1), 0.216, 1e-13);
    EXPECT_NEAR(regularized_incomplete_beta(0.25, 2.5, 4) + regularized_incomplete_beta(0.75, 4, 2.5), 1.0, 1e-13);
    EXPECT_THROW(regularized_incomplete_beta(0.5, 0, 1), InvalidArgument);
}

TEST(PairedT, DifferencesOneTwoThree) {
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {0, 0, 0};
    const auto r = paired_t_test(a, b);
    EXPECT_NEAR(r.t, 2.0 * std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(r.t, 3.4641, 1e-4);
    EXPECT_DOUBLE_EQ(r.df, 2.0);
    EXPECT_NEAR(r.p, 2 * (1 - (0.5 + r.t / (2 * std::sqrt(2 + r.t * r.t)))), 1e-12);
    EXPECT_NEAR(r.p, 0.0742, 1e-3);
    const auto rev = paired_t_test(b, a);
    EXPECT_NEAR(rev.t, -r.t, 1e-12);
    EXPECT_NEAR(rev.p, r.p, 1e-12);
}

TEST(PairedT, DegenerateCases) {
    const std::vector<double> a = {0.25, 0.5, 0.75};
    const auto same = paired_t_test(a, a);
    EXPECT_EQ(same.t, 0.0);
    EXPECT_EQ(same.p, 1.0);
    const std::vector<double> shifted = {0.375, 0.625, 0.875};
    const auto up = paired_t_test(shifted, a);
    EXPECT_TRUE(std::isinf(up.t) && up.t > 0);
    EXPECT_EQ(up.p, 0.0);
    EXPECT_TRUE(std::isinf(paired_t_test(a, shifted).t));
    EXPECT_THROW(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), InvalidArgument);
    EXPECT_THROW(paired_t_test(std::vector<double>{1, 2}, std::vector<double>{2}), InvalidArgument);
}

TEST(PairedT, RandomSamplesAgreeWithIntegrationOracle) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> noise(0.1, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + gen() % 20;
        std::vector<double> a(n), b(n);
        double mean = 0;
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = noise(gen);
            a[i] = b[i] + noise(gen);
            mean += a[i] - b[i];
        }
        mean /= n;
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) ss += std::pow(a[i] - b[i] - mean, 2);
        const double t = mean / std::sqrt(ss / (n - 1) / n);
        const auto r = paired_t_test(a, b);
        EXPECT_NEAR(r.t, t, 1e-9);
        EXPECT_NEAR(r.p, 2 * (1 - oracle::t_cdf_by_integration(std::fabs(t), n - 1.0)), 1e-8);
    }
}

TEST(Bonferroni, DividesAlpha) {
    EXPECT_EQ(bonferroni(0.05, 10), 0.005);
    EXPECT_EQ(bonferroni(0.05, 1), 0.05);
    EXPECT_THROW(bonferroni(0.05, 0), InvalidArgument);
}

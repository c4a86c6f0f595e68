#pragma once

#include <span>

namespace loe {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double x, double a, double b);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;  // two-sided
    double df = 0.0;
};

/// Paired t-test of a against b (differences a - b), df = n - 1.
/// Zero-variance differences give |t| = inf, p = 0 when the mean difference
/// is non-zero, and t = 0, p = 1 otherwise. Throws InvalidArgument when the
/// lengths differ or n < 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// alpha / m. Throws InvalidArgument for m == 0.
double bonferroni(double alpha, unsigned m);

}  // namespace loe

#pragma once

#include <cstddef>
#include <vector>

namespace hiersynth {

struct FitPoint {
    double x = 0.0;
    double y = 0.0;
};

// Ordinary least squares line with 95% confidence half-widths from the
// t-distribution on n-2 degrees of freedom.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci = 0.0;      // half-width
    double intercept_ci = 0.0;  // half-width
    double residual_stddev = 0.0;
    std::size_t n = 0;
};

// Requires >= 3 points with non-degenerate x spread; throws DegenerateError
// otherwise.
FitResult ols_fit(const std::vector<FitPoint>& points);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided critical value: the t with P(|T| <= t) = level for the given
// degrees of freedom.  level in (0, 1), dof >= 1.
double student_t_critical(double level, int dof);

// Percentage drop of b's slope relative to a's, with first-order propagation
// of both confidence half-widths.
struct ScalingReduction {
    double percent = 0.0;
    double uncertainty = 0.0;
};

ScalingReduction scaling_reduction(const FitResult& baseline, const FitResult& other);

}  // namespace hiersynth

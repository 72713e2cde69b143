#include "hiersynth/stats.hpp"

#include <cmath>
#include <limits>

#include "hiersynth/errors.hpp"

namespace hiersynth {

namespace {

// Lentz's algorithm for the continued fraction of the incomplete beta
// function; converges fast when x < (a + 1) / (a + b + 2).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-15;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

// P(|T| <= t) for Student's t with dof degrees of freedom.
double t_two_sided_cdf(double t, int dof) {
    if (t <= 0.0) {
        return 0.0;
    }
    double x = dof / (dof + t * t);
    return 1.0 - regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("incomplete beta requires positive parameters");
    }
    if (x < 0.0 || x > 1.0) {
        throw DomainError("incomplete beta argument must lie in [0, 1]");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x == 1.0) {
        return 1.0;
    }
    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_critical(double level, int dof) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw DomainError("confidence level must lie in (0, 1)");
    }
    if (dof < 1) {
        throw DomainError("degrees of freedom must be >= 1");
    }
    double hi = 1.0;
    while (t_two_sided_cdf(hi, dof) < level) {
        hi *= 2.0;
        if (hi > 1e12) {
            throw DomainError("t critical value out of range");
        }
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (t_two_sided_cdf(mid, dof) < level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

FitResult ols_fit(const std::vector<FitPoint>& points) {
    std::size_t n = points.size();
    if (n < 3) {
        throw DegenerateError("need at least 3 points for a fit with intervals");
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const FitPoint& p : points) {
        mean_x += p.x;
        mean_y += p.y;
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (const FitPoint& p : points) {
        sxx += (p.x - mean_x) * (p.x - mean_x);
        sxy += (p.x - mean_x) * (p.y - mean_y);
    }
    if (sxx <= 0.0 || !std::isfinite(sxx)) {
        throw DegenerateError("x values carry no spread; slope is undefined");
    }

    FitResult fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double ssr = 0.0;
    for (const FitPoint& p : points) {
        double r = p.y - (fit.intercept + fit.slope * p.x);
        ssr += r * r;
    }
    int dof = static_cast<int>(n) - 2;
    double variance = ssr / dof;
    fit.residual_stddev = std::sqrt(std::max(variance, 0.0));
    double t = student_t_critical(0.95, dof);
    double se_slope = fit.residual_stddev / std::sqrt(sxx);
    double se_intercept =
        fit.residual_stddev *
        std::sqrt(1.0 / static_cast<double>(n) + mean_x * mean_x / sxx);
    fit.slope_ci = t * se_slope;
    fit.intercept_ci = t * se_intercept;
    return fit;
}

ScalingReduction scaling_reduction(const FitResult& baseline, const FitResult& other) {
    if (!(baseline.slope > 0.0)) {
        throw DomainError("baseline slope must be positive to express a reduction");
    }
    ScalingReduction r;
    r.percent = 100.0 * (1.0 - other.slope / baseline.slope);
    double da = baseline.slope_ci;
    double db = other.slope_ci;
    double term_b = db / baseline.slope;
    double term_a = other.slope * da / (baseline.slope * baseline.slope);
    r.uncertainty = 100.0 * std::sqrt(term_a * term_a + term_b * term_b);
    return r;
}

}  // namespace hiersynth

#pragma once

// Beta-function family. Everything is evaluated on the log scale so that
// the normalising constants of large cohorts (t, n in the tens of
// thousands) neither underflow nor cancel.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bayescreen/errors.hpp"

namespace bayescreen::special {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// ln B(p, q).
inline double log_beta(double p, double q) {
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

/// Complete beta function B(p, q).
inline double beta(double p, double q) { return std::exp(log_beta(p, q)); }

/// log(exp(x) - exp(y)) for x >= y.
inline double log_diff_exp(double x, double y) {
    if (y == kNegInf) return x;
    if (y >= x) return kNegInf;
    return x + std::log1p(-std::exp(y - x));
}

/// log(exp(x) + exp(y)).
inline double log_sum_exp(double x, double y) {
    if (x == kNegInf) return y;
    if (y == kNegInf) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

namespace detail {

// Continued fraction for I_x(p, q), modified Lentz. Converges quickly for
// x < (p+1)/(p+q+2).
inline double beta_continued_fraction(double p, double q, double x) {
    constexpr int kMaxIterations = 200000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = p + q;
    const double qap = p + 1.0;
    const double qam = p - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;
}

inline void check_shapes(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
        throw InvalidArgument("shape", "beta shape parameters must be positive and finite");
    }
}

inline void check_unit(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument("x", "must lie in [0, 1], got " + std::to_string(x));
    }
}

}  // namespace detail

/// ln I_x(p, q), the log of the regularised lower incomplete beta function.
inline double log_regularized_incomplete_beta(double x, double p, double q) {
    detail::check_shapes(p, q);
    detail::check_unit(x);
    if (x == 0.0) return kNegInf;
    if (x == 1.0) return 0.0;
    const double log_front = p * std::log(x) + q * std::log1p(-x) - log_beta(p, q);
    if (x < (p + 1.0) / (p + q + 2.0)) {
        return log_front + std::log(detail::beta_continued_fraction(p, q, x) / p);
    }
    const double upper = std::exp(log_front) * detail::beta_continued_fraction(q, p, 1.0 - x) / q;
    return std::log1p(-upper);
}

/// ln(1 - I_x(p, q)), evaluated without forming the complement.
inline double log_regularized_incomplete_beta_upper(double x, double p, double q) {
    detail::check_unit(x);
    return log_regularized_incomplete_beta(1.0 - x, q, p);
}

inline double regularized_incomplete_beta(double x, double p, double q) {
    return std::exp(log_regularized_incomplete_beta(x, p, q));
}

/// Unnormalised lower incomplete beta integral_0^x u^(p-1) (1-u)^(q-1) du.
/// incomplete_beta(1, p, q) is the complete beta function.
inline double incomplete_beta(double x, double p, double q) {
    return std::exp(log_regularized_incomplete_beta(x, p, q) + log_beta(p, q));
}

/// ln(I_hi(p, q) - I_lo(p, q)) for lo <= hi: the log of the Beta(p, q) mass
/// on [lo, hi]. Picks whichever tail keeps the subtraction well conditioned.
inline double log_beta_mass_between(double lo, double hi, double p, double q) {
    detail::check_shapes(p, q);
    detail::check_unit(lo);
    detail::check_unit(hi);
    if (!(hi > lo)) return kNegInf;
    const double centre = p / (p + q);
    if (hi <= centre) {
        return log_diff_exp(log_regularized_incomplete_beta(hi, p, q),
                            log_regularized_incomplete_beta(lo, p, q));
    }
    if (lo >= centre) {
        return log_diff_exp(log_regularized_incomplete_beta_upper(lo, p, q),
                            log_regularized_incomplete_beta_upper(hi, p, q));
    }
    const double outside = log_sum_exp(log_regularized_incomplete_beta(lo, p, q),
                                       log_regularized_incomplete_beta_upper(hi, p, q));
    return std::log1p(-std::exp(outside));
}

/// ln of the Beta(p, q) density at x; -inf outside the support.
inline double log_beta_pdf(double x, double p, double q) {
    if (x < 0.0 || x > 1.0) return kNegInf;
    auto term = [](double shape_minus_one, double v) {
        if (shape_minus_one == 0.0) return 0.0;
        if (v == 0.0) {
            return shape_minus_one > 0.0 ? kNegInf : std::numeric_limits<double>::infinity();
        }
        return shape_minus_one * std::log(v);
    };
    return term(p - 1.0, x) + term(q - 1.0, 1.0 - x) - log_beta(p, q);
}

}  // namespace bayescreen::special

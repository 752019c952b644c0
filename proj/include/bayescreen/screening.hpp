#pragma once

// Closed-form screening algebra: predictive values, likelihood ratios, the
// prevalence threshold, exact Bayes updates and nomogram coordinates.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "bayescreen/curve.hpp"
#include "bayescreen/errors.hpp"
#include "bayescreen/probability.hpp"

namespace bayescreen {

/// Positive likelihood ratio. Infinite when the test has no false positives.
class LikelihoodRatio {
public:
    constexpr LikelihoodRatio() = default;

    explicit LikelihoodRatio(double value, const std::string& field = "kappa") : value_(value) {
        if (std::isnan(value) || value < 0.0) {
            throw InvalidArgument(field, "likelihood ratio must be non-negative, got " +
                                             std::to_string(value));
        }
    }

    static LikelihoodRatio infinite() {
        return LikelihoodRatio(std::numeric_limits<double>::infinity());
    }

    double value() const noexcept { return value_; }
    bool is_infinite() const noexcept { return std::isinf(value_); }
    bool is_positive_finite() const noexcept { return value_ > 0.0 && !is_infinite(); }

    friend LikelihoodRatio operator*(LikelihoodRatio lhs, LikelihoodRatio rhs) {
        if ((lhs.is_infinite() && rhs.value_ == 0.0) || (rhs.is_infinite() && lhs.value_ == 0.0)) {
            throw UndefinedRatio("product of zero and infinite likelihood ratios");
        }
        return LikelihoodRatio(lhs.value_ * rhs.value_);
    }

private:
    double value_ = 1.0;
};

struct TestCharacteristics {
    Probability sensitivity;
    Probability specificity;

    TestCharacteristics() = default;
    TestCharacteristics(Probability sens, Probability spec) : sensitivity(sens), specificity(spec) {}
    TestCharacteristics(double sens, double spec)
        : sensitivity(sens, "sensitivity"), specificity(spec, "specificity") {}

    double false_positive_rate() const noexcept { return specificity.complement(); }

    /// Youden's J = a + b - 1, in [-1, 1].
    double youden() const noexcept {
        return sensitivity.value() + specificity.value() - 1.0;
    }

    /// a = 0 and b = 1: the test never reports a positive.
    bool degenerate() const noexcept {
        return sensitivity.value() == 0.0 && specificity.value() == 1.0;
    }
};

inline LikelihoodRatio positive_lr(const TestCharacteristics& test) {
    if (test.degenerate()) {
        throw UndefinedRatio("sensitivity 0 and specificity 1 give 0/0");
    }
    if (test.specificity.value() == 1.0) return LikelihoodRatio::infinite();
    return LikelihoodRatio(test.sensitivity.value() / test.false_positive_rate());
}

/// Positive predictive value a*phi / (a*phi + (1-b)(1-phi)).
/// At phi = 0 with b = 1 the ratio is 0/0; the limit from above (0) is returned.
inline Probability ppv(const TestCharacteristics& test, Probability pretest) {
    if (test.degenerate()) {
        throw DegenerateTest("sensitivity 0 and specificity 1: the test never reports a positive");
    }
    const double a = test.sensitivity.value();
    const double phi = pretest.value();
    const double num = a * phi;
    const double den = num + test.false_positive_rate() * pretest.complement();
    if (den == 0.0) {
        if (phi == 0.0) return Probability(0.0);
        throw DegenerateTest("no positives are produced at pretest " + std::to_string(phi));
    }
    return Probability::clamped(num / den);
}

/// Negative predictive value b(1-phi) / (b(1-phi) + (1-a)phi). Equals 1 at phi = 0.
inline Probability npv(const TestCharacteristics& test, Probability pretest) {
    if (pretest.value() == 0.0) return Probability(1.0);
    const double num = test.specificity.value() * pretest.complement();
    const double den = num + test.sensitivity.complement() * pretest.value();
    if (den == 0.0) {
        throw DegenerateTest("no negatives are produced at pretest " +
                             std::to_string(pretest.value()));
    }
    return Probability::clamped(num / den);
}

/// Pretest probability at the point of maximum curvature of the PPV curve:
/// sqrt(1-b) / (sqrt(a) + sqrt(1-b)).
inline Probability prevalence_threshold(const TestCharacteristics& test) {
    if (test.degenerate()) {
        throw DegenerateTest("prevalence threshold is 0/0 for sensitivity 0 and specificity 1");
    }
    const double root_fpr = std::sqrt(test.false_positive_rate());
    return Probability::clamped(root_fpr / (std::sqrt(test.sensitivity.value()) + root_fpr));
}

/// sqrt(a/(1-b)) * threshold; requires a finite likelihood ratio.
inline Probability ppv_at_threshold(const TestCharacteristics& test) {
    if (test.specificity.value() == 1.0) {
        throw DegenerateTest("specificity 1 gives an infinite likelihood ratio");
    }
    const double kappa = test.sensitivity.value() / test.false_positive_rate();
    return Probability::clamped(std::sqrt(kappa) * prevalence_threshold(test).value());
}

/// Prevalence threshold expressed through the likelihood ratio, 1/(1 + sqrt(kappa)).
inline Probability threshold_from_lr(LikelihoodRatio kappa) {
    if (!kappa.is_positive_finite()) {
        throw InvalidArgument("kappa", "must be positive and finite");
    }
    return Probability(1.0 / (1.0 + std::sqrt(kappa.value())));
}

/// Exact Bayes update on the odds scale: kappa*phi / (1 + (kappa-1)*phi).
inline Probability posttest_exact(Probability pretest, LikelihoodRatio kappa) {
    if (kappa.value() == 0.0) throw InvalidArgument("kappa", "must be positive");
    const double phi = pretest.value();
    if (phi == 0.0 || phi == 1.0) return pretest;
    if (kappa.is_infinite()) return Probability(1.0);
    const double k = kappa.value();
    return Probability::clamped(k * phi / (1.0 + (k - 1.0) * phi));
}

/// PPV over a closed uniform grid on [0, 1].
inline CurveSeries ppv_curve(const TestCharacteristics& test, std::size_t grid_size) {
    CurveSeries series{{}, "pretest", "ppv"};
    const auto grid = uniform_grid(0.0, 1.0, grid_size);
    series.points.reserve(grid.size());
    for (double phi : grid) {
        series.points.push_back({phi, ppv(test, Probability(phi)).value()});
    }
    return series;
}

/// Ordinates of the straight line on a Fagan nomogram. The pretest axis runs
/// inverted, so `left` holds -logit(pretest); logit(pretest) + mid == right.
struct FaganLine {
    double left = 0.0;
    double mid = 0.0;
    double right = 0.0;
    Probability posttest;
};

inline FaganLine fagan_coordinates(Probability pretest, LikelihoodRatio kappa) {
    if (!kappa.is_positive_finite()) {
        throw InvalidArgument("kappa", "must be positive and finite");
    }
    const Probability post = posttest_exact(pretest, kappa);
    return FaganLine{-logit(pretest), std::log(kappa.value()), logit(post), post};
}

}  // namespace bayescreen

#pragma once

// Logit-based bedside heuristics: the linear log-odds approximation
// delta_p ~ slope * ln(kappa), a-priori pretest bounds from products of
// finding-level likelihood ratios, qualitative risk categories, and an
// audit of the approximation against the exact Bayes update.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bayescreen/curve.hpp"
#include "bayescreen/errors.hpp"
#include "bayescreen/probability.hpp"
#include "bayescreen/quadrature.hpp"
#include "bayescreen/screening.hpp"

namespace bayescreen {

/// The two constants of the heuristic. `slope` (0.22, i.e. divisor 4.5454)
/// drives the per-test update and reproduces the kappa table; the pretest
/// bounds divide by `display_divisor` (5 by default).
struct HeuristicConstant {
    double slope = 0.22;
    double display_divisor = 5.0;

    HeuristicConstant() = default;
    HeuristicConstant(double slope_, double display_divisor_)
        : slope(slope_), display_divisor(display_divisor_) {
        if (!(slope > 0.0) || !std::isfinite(slope)) {
            throw InvalidArgument("constant", "slope must be positive");
        }
        if (!(display_divisor > 0.0) || !std::isfinite(display_divisor)) {
            throw InvalidArgument("constant", "divisor must be positive");
        }
    }

    double divisor() const noexcept { return 1.0 / slope; }

    /// Slope 0.22 for updates, divisor 5 for pretest bounds.
    static HeuristicConstant standard() { return {0.22, 5.0}; }
    /// Both roles use slope 0.22 (divisor ~4.54).
    static HeuristicConstant precise() { return {0.22, 1.0 / 0.22}; }
    /// Both roles use the rounded divisor 5.
    static HeuristicConstant rounded() { return {0.2, 5.0}; }

    /// Parses the command-line spelling "4.54" or "5".
    static HeuristicConstant parse(std::string_view text) {
        if (text == "4.54") return precise();
        if (text == "5") return rounded();
        throw InvalidArgument("constant", "must be 4.54 or 5");
    }
};

/// A heuristic probability together with its bookkeeping flags.
struct HeuristicValue {
    Probability value;
    double raw = 0.0;
    bool clamped = false;
    bool out_of_domain = false;
};

inline HeuristicValue make_heuristic_value(double raw) {
    HeuristicValue v;
    v.raw = raw;
    v.value = Probability::clamped(raw);
    v.clamped = v.value.value() != raw;
    return v;
}

namespace detail {
inline void require_positive_finite(LikelihoodRatio kappa, const char* field = "kappa") {
    if (!kappa.is_positive_finite()) throw InvalidArgument(field, "must be positive and finite");
}
}  // namespace detail

/// Change in probability predicted for a test with likelihood ratio kappa.
inline double mcgee_delta(LikelihoodRatio kappa, const HeuristicConstant& c = {}) {
    detail::require_positive_finite(kappa);
    return std::log(kappa.value()) * c.slope;
}

/// Approximate posttest probability pretest + slope*ln(kappa). Flags pretest
/// values outside [0.1, 0.9], where the linearisation is poor.
inline HeuristicValue mcgee_posttest(Probability pretest, LikelihoodRatio kappa,
                                     const HeuristicConstant& c = {}) {
    HeuristicValue v = make_heuristic_value(pretest.value() + mcgee_delta(kappa, c));
    v.out_of_domain = pretest.value() < 0.1 || pretest.value() > 0.9;
    return v;
}

/// Pretest probability needed to reach `target` after a test with ratio kappa.
inline HeuristicValue required_pretest(Probability target, LikelihoodRatio kappa,
                                       const HeuristicConstant& c = {}) {
    return make_heuristic_value(target.value() - mcgee_delta(kappa, c));
}

/// Likelihood ratio needed to move `pretest` to `target`: exp(divisor * gap).
inline LikelihoodRatio required_lr(Probability pretest, Probability target,
                                   const HeuristicConstant& c = {}) {
    if (target < pretest) {
        throw InvalidTarget("target " + std::to_string(target.value()) +
                            " is below the pretest probability " +
                            std::to_string(pretest.value()));
    }
    return LikelihoodRatio(std::exp(c.divisor() * (target.value() - pretest.value())));
}

/// Pretest probability at which a positive result reaches 0.5, across kappa.
inline CurveSeries tipping_curve(const HeuristicConstant& c, std::span<const double> kappas) {
    CurveSeries series{{}, "kappa", "pretest"};
    series.points.reserve(kappas.size());
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        if (i > 0 && !(kappas[i] > kappas[i - 1])) {
            throw InvalidArgument("kappa_grid", "must be strictly increasing");
        }
        const auto y = required_pretest(Probability(0.5), LikelihoodRatio(kappas[i]), c);
        series.points.push_back({kappas[i], y.value.value()});
    }
    return series;
}

/// Likelihood ratio at which the minimal pretest bound ln(kappa)/divisor meets
/// the prevalence threshold 1/(1 + sqrt(kappa)), bracketed on (1, 100).
inline double threshold_crossing_objective(double kappa, const HeuristicConstant& c) {
    return std::log(kappa) / c.display_divisor - 1.0 / (1.0 + std::sqrt(kappa));
}

inline double threshold_crossing_kappa(const HeuristicConstant& c = {}) {
    return quad::bisect([&c](double k) { return threshold_crossing_objective(k, c); }, 1.0, 100.0,
                        1e-13);
}

// --- findings --------------------------------------------------------------

/// A sign, symptom or risk factor with its own likelihood ratio.
struct Finding {
    std::string label;
    LikelihoodRatio kappa;

    Finding() = default;
    Finding(std::string label_, double kappa_) : label(std::move(label_)), kappa(kappa_) {
        detail::require_positive_finite(kappa);
    }
};

struct FindingSet {
    std::vector<Finding> findings;
    std::optional<Probability> baseline_prevalence;

    /// ln of the product of all finding ratios, summed in (label, kappa)
    /// order so any permutation of the findings gives the same bits.
    double log_product() const {
        std::vector<const Finding*> order;
        order.reserve(findings.size());
        for (const auto& f : findings) order.push_back(&f);
        std::sort(order.begin(), order.end(), [](const Finding* l, const Finding* r) {
            if (l->label != r->label) return l->label < r->label;
            return l->kappa.value() < r->kappa.value();
        });
        double total = 0.0;
        for (const Finding* f : order) {
            detail::require_positive_finite(f->kappa, "findings");
            total += std::log(f->kappa.value());
        }
        return total;
    }

    double product() const { return std::exp(log_product()); }
};

/// Minimal a-priori pretest probability ln(prod kappa)/divisor (+ baseline).
inline HeuristicValue pretest_min_bound(const FindingSet& fs, const HeuristicConstant& c = {}) {
    double raw = fs.log_product() / c.display_divisor;
    if (fs.baseline_prevalence) raw += fs.baseline_prevalence->value();
    return make_heuristic_value(raw);
}

struct PretestEstimate {
    Probability min_bound;
    Probability max_bound{1.0};
    Probability mean;
    HeuristicConstant constant_used;
    double raw_min = 0.0;
    bool clamped = false;
};

/// Mean of the minimal bound and the maximal bound 1, with the range.
inline PretestEstimate pretest_estimate(const FindingSet& fs, const HeuristicConstant& c = {}) {
    const HeuristicValue min = pretest_min_bound(fs, c);
    PretestEstimate est;
    est.min_bound = min.value;
    est.mean = Probability(0.5 * (1.0 + min.value.value()));
    est.constant_used = c;
    est.raw_min = min.raw;
    est.clamped = min.clamped;
    return est;
}

// --- qualitative classes ---------------------------------------------------

enum class RiskCategory { VeryUnlikely, Unlikely, Uncertain, Likely, VeryLikely };

struct RiskBand {
    RiskCategory category;
    std::string_view name;
    double lower;  // inclusive
    double upper;  // exclusive, except the last band
};

// Printed gaps (33/34 and 66/67 percent) split at their midpoints.
inline constexpr std::array<RiskBand, 5> kRiskBands{{
    {RiskCategory::VeryUnlikely, "very unlikely", 0.0, 0.10},
    {RiskCategory::Unlikely, "unlikely", 0.10, 0.335},
    {RiskCategory::Uncertain, "uncertain", 0.335, 0.665},
    {RiskCategory::Likely, "likely", 0.665, 0.905},
    {RiskCategory::VeryLikely, "very likely", 0.905, 1.0},
}};

inline const RiskBand& risk_band(RiskCategory category) {
    return kRiskBands[static_cast<std::size_t>(category)];
}

inline RiskCategory medow_lucey_category(Probability p) {
    for (const auto& band : kRiskBands) {
        if (p.value() < band.upper) return band.category;
    }
    return RiskCategory::VeryLikely;
}

/// One category up after a positive result, one down after a negative,
/// saturating at both ends.
inline RiskCategory medow_lucey_update(RiskCategory category, bool test_positive) {
    const int index = static_cast<int>(category) + (test_positive ? 1 : -1);
    return static_cast<RiskCategory>(std::clamp(index, 0, static_cast<int>(kRiskBands.size()) - 1));
}

inline std::optional<RiskCategory> parse_risk_category(std::string_view name) {
    for (const auto& band : kRiskBands) {
        if (band.name == name) return band.category;
    }
    return std::nullopt;
}

struct PowerClass {
    std::string_view name;
    double log10_kappa;
};

inline constexpr std::array<PowerClass, 9> kPowerClasses{{
    {"Very strong confirmer", 2.0},
    {"Strong confirmer", 1.5},
    {"Good confirmer", 1.0},
    {"Weak confirmer", 0.5},
    {"Useless", 0.0},
    {"Weak excluder", -0.5},
    {"Good excluder", -1.0},
    {"Strong excluder", -1.5},
    {"Very strong excluder", -2.0},
}};

/// Class with the nearest log10(kappa) anchor; ties go toward "Useless".
inline const PowerClass& clinical_power_class(LikelihoodRatio kappa) {
    detail::require_positive_finite(kappa);
    const double x = std::log10(kappa.value());
    const PowerClass* best = &kPowerClasses.front();
    double best_distance = std::fabs(x - best->log10_kappa);
    for (const auto& pc : kPowerClasses) {
        const double d = std::fabs(x - pc.log10_kappa);
        const bool tie = std::fabs(d - best_distance) <= 1e-12;
        if ((d < best_distance && !tie) ||
            (tie && std::fabs(pc.log10_kappa) < std::fabs(best->log10_kappa))) {
            best = &pc;
            best_distance = d;
        }
    }
    return *best;
}

// --- audit -----------------------------------------------------------------

/// |heuristic - exact| over a (pretest, kappa) grid, row-major by pretest.
struct AuditSurface {
    std::vector<double> pretests;
    std::vector<double> kappas;
    std::vector<double> errors;
    // Maximum over pretests in [0.1, 0.9].
    double max_error = 0.0;
    double argmax_pretest = 0.0;
    double argmax_kappa = 0.0;

    double at(std::size_t i, std::size_t j) const { return errors[i * kappas.size() + j]; }
};

inline AuditSurface heuristic_audit(std::span<const double> pretests, std::span<const double> kappas,
                                    const HeuristicConstant& c = {}) {
    AuditSurface surface;
    surface.pretests.assign(pretests.begin(), pretests.end());
    surface.kappas.assign(kappas.begin(), kappas.end());
    surface.errors.resize(pretests.size() * kappas.size());
    for (double phi : pretests) {
        if (!(phi > 0.0 && phi < 1.0)) throw InvalidArgument("pretest_grid", "must lie in (0, 1)");
    }
    std::vector<double> deltas(kappas.size());
    for (std::size_t j = 0; j < kappas.size(); ++j) {
        deltas[j] = mcgee_delta(LikelihoodRatio(kappas[j], "kappa_grid"), c);
    }
    for (std::size_t i = 0; i < pretests.size(); ++i) {
        const Probability phi(pretests[i]);
        const bool in_window = phi.value() >= 0.1 && phi.value() <= 0.9;
        for (std::size_t j = 0; j < kappas.size(); ++j) {
            const double heuristic = std::clamp(phi.value() + deltas[j], 0.0, 1.0);
            const double exact = posttest_exact(phi, LikelihoodRatio(kappas[j])).value();
            const double err = std::fabs(heuristic - exact);
            surface.errors[i * kappas.size() + j] = err;
            if (in_window && err > surface.max_error) {
                surface.max_error = err;
                surface.argmax_pretest = phi.value();
                surface.argmax_kappa = kappas[j];
            }
        }
    }
    return surface;
}

}  // namespace bayescreen

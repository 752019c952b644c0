#pragma once

// Prevalence estimation from cohort data.
//
// Frequentist: apparent prevalence and the Rogan-Gladen correction with a
// Wald interval. Bayesian: conjugate beta updating, the posterior of the
// prevalence under a test of known sensitivity/specificity with a uniform
// prior, and the marginal posterior when sensitivity and specificity are
// themselves uncertain and learned from validation counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bayescreen/density.hpp"
#include "bayescreen/errors.hpp"
#include "bayescreen/probability.hpp"
#include "bayescreen/quadrature.hpp"
#include "bayescreen/screening.hpp"
#include "bayescreen/special_functions.hpp"

namespace bayescreen {

inline constexpr std::size_t kDefaultPrevalenceGrid = 2048;
inline constexpr std::size_t kDefaultParameterGrid = 128;
inline constexpr double kDefaultZ = 1.96;

/// n subjects tested, t of them positive.
struct CohortObservation {
    std::uint64_t n = 0;
    std::uint64_t t = 0;

    CohortObservation() = default;
    CohortObservation(std::uint64_t n_, std::uint64_t t_) : n(n_), t(t_) {
        if (t > n) throw InvalidArgument("t", "positive count exceeds cohort size");
    }
};

/// Validation counts: t_a true positives out of n_a known positives and
/// t_b false positives out of n_b known negatives.
struct ValidationData {
    std::uint64_t n_a = 0;
    std::uint64_t t_a = 0;
    std::uint64_t n_b = 0;
    std::uint64_t t_b = 0;

    ValidationData() = default;
    ValidationData(std::uint64_t na, std::uint64_t ta, std::uint64_t nb, std::uint64_t tb)
        : n_a(na), t_a(ta), n_b(nb), t_b(tb) {
        if (t_a > n_a) throw InvalidArgument("t_a", "true positives exceed known positives");
        if (t_b > n_b) throw InvalidArgument("t_b", "false positives exceed known negatives");
    }
};

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    BetaParams() = default;
    BetaParams(double a, double b) : alpha(a), beta(b) {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
            throw InvalidPrior("beta shapes must be positive and finite, got (" +
                               std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    }

    static BetaParams uniform() { return {1.0, 1.0}; }
};

struct BetaMoments {
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double sd = 0.0;
};

/// Point estimate with a (clamped) symmetric interval.
struct IntervalEstimate {
    Probability point;
    Probability lower;
    Probability upper;
    double raw_point = 0.0;
    double z = kDefaultZ;
    bool clamped = false;
};

/// Two-sided standard-normal critical value for a central interval.
inline double z_for_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level", "must lie in (0, 1)");
    const double upper_tail = 0.5 * (1.0 - level);
    return quad::bisect(
        [upper_tail](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)) - upper_tail; },
        0.0, 40.0, 1e-14);
}

inline Probability apparent_prevalence(const CohortObservation& obs) {
    if (obs.n == 0) throw EmptyCohort("no subjects were tested");
    return Probability(static_cast<double>(obs.t) / static_cast<double>(obs.n));
}

/// Rogan-Gladen: (t/n - (1 - b)) / J with a Wald interval of half-width
/// z * sqrt(p(1-p)/n) around the clamped point.
inline IntervalEstimate rogan_gladen(const CohortObservation& obs, const TestCharacteristics& test,
                                     double z = kDefaultZ) {
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("z", "must be positive");
    const double j = test.youden();
    if (!(j > 0.0)) {
        throw UninformativeTest("Youden's J = " + std::to_string(j) + " must be positive");
    }
    const double apparent = apparent_prevalence(obs).value();

    IntervalEstimate est;
    est.z = z;
    est.raw_point = (apparent - test.false_positive_rate()) / j;
    const double point = std::clamp(est.raw_point, 0.0, 1.0);
    const double half = z * std::sqrt(point * (1.0 - point) / static_cast<double>(obs.n));
    const double lo = point - half;
    const double hi = point + half;
    est.point = Probability(point);
    est.lower = Probability(std::clamp(lo, 0.0, 1.0));
    est.upper = Probability(std::clamp(hi, 0.0, 1.0));
    est.clamped = point != est.raw_point || lo < 0.0 || hi > 1.0;
    return est;
}

inline BetaParams beta_update(const BetaParams& prior, const CohortObservation& obs) {
    return BetaParams(prior.alpha + static_cast<double>(obs.t),
                      prior.beta + static_cast<double>(obs.n - obs.t));
}

inline BetaMoments beta_moments(const BetaParams& p) {
    const double s = p.alpha + p.beta;
    BetaMoments m;
    m.mean = p.alpha / s;
    m.second_moment = p.alpha * (p.alpha + 1.0) / (s * (s + 1.0));
    m.variance = p.alpha * p.beta / (s * s * (s + 1.0));
    m.sd = std::sqrt(m.variance);
    return m;
}

/// Unnormalised lower incomplete beta at x for the given shapes.
inline double incomplete_beta(double x, const BetaParams& p) {
    return special::incomplete_beta(x, p.alpha, p.beta);
}

/// Beta density on a uniform grid. An endpoint where the density is infinite
/// (shape < 1) takes the mean density over its half cell.
inline DensityGrid beta_pdf(const BetaParams& p, std::size_t grid_size) {
    DensityGrid grid = make_density_grid(grid_size, 16);
    const double h = grid.step();
    for (std::size_t i = 0; i < grid_size; ++i) {
        grid.values[i] = std::exp(special::log_beta_pdf(grid.support[i], p.alpha, p.beta));
    }
    if (!std::isfinite(grid.values.front())) {
        grid.values.front() =
            special::regularized_incomplete_beta(0.5 * h, p.alpha, p.beta) / (0.5 * h);
    }
    if (!std::isfinite(grid.values.back())) {
        grid.values.back() =
            std::exp(special::log_regularized_incomplete_beta_upper(1.0 - 0.5 * h, p.alpha,
                                                                    p.beta)) /
            (0.5 * h);
    }
    grid.analytic_mass = grid.integral();
    normalize(grid);
    return grid;
}

namespace detail {

// Analytically normalised posterior of the prevalence under a uniform prior
// and known (a, b), written into `out`:
//   J * phat^t (1 - phat)^(n-t) / (B(t+1, n-t+1) * [I_a - I_(1-b)]),
// with phat = (1 - b) + J phi. Requires J > 0.
inline void known_parameter_density(const CohortObservation& obs, double a, double b,
                                    std::span<const double> support, std::span<double> out) {
    const double j = a + b - 1.0;
    const double fpr = 1.0 - b;
    const double t = static_cast<double>(obs.t);
    const double misses = static_cast<double>(obs.n - obs.t);
    const double shape_p = t + 1.0;
    const double shape_q = misses + 1.0;
    const double log_norm = std::log(j) - special::log_beta(shape_p, shape_q) -
                            special::log_beta_mass_between(fpr, a, shape_p, shape_q);
    for (std::size_t i = 0; i < support.size(); ++i) {
        const double phi = support[i];
        const double positive = std::max(0.0, fpr + j * phi);
        const double negative = std::max(0.0, b - j * phi);
        double log_value = log_norm;
        if (obs.t > 0) log_value += t * std::log(positive);
        if (obs.n > obs.t) log_value += misses * std::log(negative);
        out[i] = std::exp(log_value);
    }
}

inline void check_known_inputs(const CohortObservation& obs, const TestCharacteristics& test) {
    if (obs.n == 0) throw EmptyCohort("no subjects were tested");
    if (!(test.youden() > 0.0)) {
        throw UninformativeTest("Youden's J = " + std::to_string(test.youden()) +
                                " must be positive");
    }
}

}  // namespace detail

/// Posterior of the prevalence given t of n positives, a test with known
/// sensitivity a and specificity b, and a uniform prior on the prevalence.
/// Density is proportional to [(1-b) + J phi]^t [b - J phi]^(n-t).
inline DensityGrid baxter_posterior_known(const CohortObservation& obs,
                                          const TestCharacteristics& test,
                                          std::size_t grid_size = kDefaultPrevalenceGrid) {
    detail::check_known_inputs(obs, test);
    DensityGrid grid = make_density_grid(grid_size, 16);
    detail::known_parameter_density(obs, test.sensitivity.value(), test.specificity.value(),
                                    grid.support, grid.values);
    grid.analytic_mass = grid.integral();
    normalize(grid);
    return grid;
}

/// Central quantile window [Q(tail), Q(1 - tail)] of a beta distribution.
inline std::pair<double, double> beta_quantile_window(const BetaParams& p, double tail = 1e-10) {
    const double log_tail = std::log(tail);
    auto lower = [&](double x) {
        return special::log_regularized_incomplete_beta(x, p.alpha, p.beta) - log_tail;
    };
    auto upper = [&](double x) {
        return log_tail - special::log_regularized_incomplete_beta_upper(x, p.alpha, p.beta);
    };
    constexpr double kEdge = 1e-12;
    const double lo = lower(kEdge) >= 0.0 ? kEdge : quad::bisect(lower, kEdge, 1.0 - kEdge, 1e-15);
    const double hi =
        upper(1.0 - kEdge) <= 0.0 ? 1.0 - kEdge : quad::bisect(upper, kEdge, 1.0 - kEdge, 1e-15);
    return {lo, hi};
}

struct ParameterGridSizes {
    std::size_t prevalence = kDefaultPrevalenceGrid;
    std::size_t sensitivity = kDefaultParameterGrid;
    std::size_t specificity = kDefaultParameterGrid;
};

/// Posterior of the sensitivity from the validation counts.
inline BetaParams sensitivity_posterior(const ValidationData& val, const BetaParams& prior) {
    return BetaParams(prior.alpha + static_cast<double>(val.t_a),
                      prior.beta + static_cast<double>(val.n_a - val.t_a));
}

/// Posterior of the specificity: the n_b - t_b true negatives count as
/// successes, the t_b false positives as failures.
inline BetaParams specificity_posterior(const ValidationData& val, const BetaParams& prior) {
    return BetaParams(prior.alpha + static_cast<double>(val.n_b - val.t_b),
                      prior.beta + static_cast<double>(val.t_b));
}

/// Marginal posterior of the prevalence when sensitivity and specificity are
/// uncertain: the known-parameter posterior averaged over the validation
/// posteriors of a and b by nested trapezoidal quadrature. Each parameter
/// axis spans the central 1 - 2e-10 quantile window of its posterior, and
/// (a, b) nodes with J <= 0 carry no weight.
inline DensityGrid baxter_posterior_unknown(const CohortObservation& obs,
                                            const ValidationData& val,
                                            const BetaParams& prior_sensitivity,
                                            const BetaParams& prior_specificity,
                                            ParameterGridSizes sizes = {}) {
    if (obs.n == 0) throw EmptyCohort("no subjects were tested");
    if (sizes.sensitivity < 32) throw InvalidArgument("grid_a", "must be at least 32");
    if (sizes.specificity < 32) throw InvalidArgument("grid_b", "must be at least 32");

    const BetaParams post_a = sensitivity_posterior(val, prior_sensitivity);
    const BetaParams post_b = specificity_posterior(val, prior_specificity);

    struct Axis {
        std::vector<double> nodes;
        std::vector<double> log_weights;
    };
    auto build_axis = [](const BetaParams& p, std::size_t count) {
        const auto [lo, hi] = beta_quantile_window(p);
        Axis axis;
        axis.nodes = uniform_grid(lo, hi, count);
        const auto weights = quad::trapezoid_weights(count, (hi - lo) / static_cast<double>(count - 1));
        axis.log_weights.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            axis.log_weights[i] =
                std::log(weights[i]) + special::log_beta_pdf(axis.nodes[i], p.alpha, p.beta);
        }
        return axis;
    };
    const Axis sens = build_axis(post_a, sizes.sensitivity);
    const Axis spec = build_axis(post_b, sizes.specificity);

    double log_weight_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sens.nodes.size(); ++i) {
        for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
            if (sens.nodes[i] + spec.nodes[j] - 1.0 <= 0.0) continue;
            log_weight_max = std::max(log_weight_max, sens.log_weights[i] + spec.log_weights[j]);
        }
    }
    if (!std::isfinite(log_weight_max)) {
        throw UninformativeTest("no sensitivity/specificity node has Youden's J > 0");
    }

    DensityGrid grid = make_density_grid(sizes.prevalence, 16, "grid");
    std::vector<double> conditional(grid.size());
    double weight_total = 0.0;
    // Fixed summation order (a outer, b inner) keeps results reproducible.
    for (std::size_t i = 0; i < sens.nodes.size(); ++i) {
        for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
            const double a = sens.nodes[i];
            const double b = spec.nodes[j];
            if (a + b - 1.0 <= 0.0) continue;
            const double w = std::exp(sens.log_weights[i] + spec.log_weights[j] - log_weight_max);
            if (w == 0.0) continue;
            detail::known_parameter_density(obs, a, b, grid.support, conditional);
            for (std::size_t k = 0; k < grid.size(); ++k) grid.values[k] += w * conditional[k];
            weight_total += w;
        }
    }
    for (double& v : grid.values) v /= weight_total;
    grid.analytic_mass = grid.integral();
    normalize(grid);
    return grid;
}

}  // namespace bayescreen

#pragma once

// Seeded Monte-Carlo cohorts and a brute-force grid Bayes oracle.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Uniform variates are (x >> 11) * 2^-53 and a Bernoulli(p)
// draw succeeds when the variate is below p, so the stream of outcomes is
// identical on every conforming platform. Replicate r is seeded with
// seed + r, which lets replicates run in any order.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bayescreen/density.hpp"
#include "bayescreen/errors.hpp"
#include "bayescreen/estimators.hpp"
#include "bayescreen/probability.hpp"
#include "bayescreen/screening.hpp"

namespace bayescreen {

struct SimConfig {
    std::uint64_t n = 1;
    Probability true_prevalence;
    TestCharacteristics test;
    std::uint64_t seed = 0;
    std::uint64_t replicates = 1;

    void validate() const {
        if (n < 1) throw InvalidArgument("n", "must be at least 1");
        if (replicates < 1) throw InvalidArgument("replicates", "must be at least 1");
    }
};

struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t positives() const noexcept { return tp + fp; }
    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// `t` and `confusion` describe replicate 0; `replicates` holds all of them.
struct SimResult {
    std::uint64_t t = 0;
    Confusion confusion;
    std::vector<Confusion> replicates;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next() < p; }

private:
    std::mt19937_64 engine_;
};

inline Confusion simulate_replicate(const SimConfig& cfg, std::uint64_t replicate) {
    UniformStream rng(cfg.seed + replicate);
    const double phi = cfg.true_prevalence.value();
    const double sens = cfg.test.sensitivity.value();
    const double fpr = cfg.test.false_positive_rate();
    Confusion c;
    for (std::uint64_t i = 0; i < cfg.n; ++i) {
        const bool diseased = rng.bernoulli(phi);
        const bool positive = rng.bernoulli(diseased ? sens : fpr);
        if (diseased) {
            positive ? ++c.tp : ++c.fn;
        } else {
            positive ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

/// Each subject is diseased with the true prevalence; diseased subjects test
/// positive with the sensitivity, healthy ones with 1 - specificity.
inline SimResult simulate(const SimConfig& cfg) {
    cfg.validate();
    SimResult result;
    result.replicates.reserve(cfg.replicates);
    for (std::uint64_t r = 0; r < cfg.replicates; ++r) {
        result.replicates.push_back(simulate_replicate(cfg, r));
    }
    result.confusion = result.replicates.front();
    result.t = result.confusion.positives();
    return result;
}

/// Replicate table: header row then one comma-separated line per replicate.
inline void write_replicate_table(std::ostream& out, const SimResult& result) {
    out << "replicate,t,TP,FP,TN,FN\n";
    for (std::size_t r = 0; r < result.replicates.size(); ++r) {
        const Confusion& c = result.replicates[r];
        out << r << ',' << c.positives() << ',' << c.tp << ',' << c.fp << ',' << c.tn << ','
            << c.fn << '\n';
    }
}

struct CoverageReport {
    double coverage = 0.0;
    double clamp_rate = 0.0;
    double mean_point = 0.0;
    std::uint64_t replicates = 0;
};

/// Fraction of simulated Rogan-Gladen intervals that contain the truth.
inline CoverageReport coverage_experiment(const SimConfig& cfg, double z = kDefaultZ) {
    cfg.validate();
    const SimResult sim = simulate(cfg);
    const double truth = cfg.true_prevalence.value();
    std::uint64_t covered = 0;
    std::uint64_t clamped = 0;
    double point_total = 0.0;
    for (const Confusion& c : sim.replicates) {
        const IntervalEstimate est = rogan_gladen(CohortObservation(cfg.n, c.positives()), cfg.test, z);
        if (est.lower.value() <= truth && truth <= est.upper.value()) ++covered;
        if (est.clamped) ++clamped;
        point_total += est.point.value();
    }
    const auto reps = static_cast<double>(sim.replicates.size());
    return CoverageReport{static_cast<double>(covered) / reps, static_cast<double>(clamped) / reps,
                          point_total / reps, sim.replicates.size()};
}

enum class LikelihoodKind { Binomial, Transformed };

/// Prior and, for the transformed likelihood, the test whose error rates map
/// the prevalence to the positive-test probability (1 - b) + J phi.
struct OracleParams {
    BetaParams prior = BetaParams::uniform();
    std::optional<TestCharacteristics> test;
};

/// Pointwise prior x likelihood on a uniform grid, normalised by the
/// trapezoidal rule. Deliberately shares nothing with the conjugate and
/// known-parameter paths it is used to check.
inline DensityGrid grid_bayes_oracle(const CohortObservation& obs, LikelihoodKind kind,
                                     const OracleParams& params, std::size_t grid_size) {
    DensityGrid grid = make_density_grid(grid_size, 256);
    if (kind == LikelihoodKind::Transformed && !params.test) {
        throw InvalidArgument("test", "transformed likelihood needs sensitivity and specificity");
    }
    const double t = static_cast<double>(obs.t);
    const double f = static_cast<double>(obs.n - obs.t);
    const double alpha = params.prior.alpha;
    const double beta = params.prior.beta;
    auto xlogy = [](double x, double y) -> long double {
        if (x == 0.0) return 0.0L;
        return static_cast<long double>(x) * std::log(static_cast<long double>(y));
    };

    std::vector<long double> log_values(grid_size);
    long double peak = -INFINITY;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double phi = grid.support[i];
        double success = phi;
        if (kind == LikelihoodKind::Transformed) {
            const double a = params.test->sensitivity.value();
            const double b = params.test->specificity.value();
            success = a * phi + (1.0 - b) * (1.0 - phi);
        }
        const long double lv = xlogy(alpha - 1.0, phi) + xlogy(beta - 1.0, 1.0 - phi) +
                               xlogy(t, success) + xlogy(f, 1.0 - success);
        log_values[i] = lv;
        if (!std::isnan(static_cast<double>(lv)) && lv > peak) peak = lv;
    }
    for (std::size_t i = 0; i < grid_size; ++i) {
        grid.values[i] = static_cast<double>(std::exp(log_values[i] - peak));
    }
    normalize(grid);
    return grid;
}

}  // namespace bayescreen

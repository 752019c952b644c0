#pragma once

#include <array>
#include <vector>

#include "bayescreen/heuristics.hpp"

namespace bayescreen {

/// Pretest needed to reach a posttest of 1.0 and of 0.5, per kappa.
struct KappaTableRow {
    double kappa = 0.0;
    double delta = 0.0;
    double pretest_for_certainty = 0.0;
    double pretest_for_even_odds = 0.0;
};

/// Pretest mean and range per product of finding ratios.
struct PretestTableRow {
    double kappa_product = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 1.0;
};

inline constexpr std::array<double, 10> kKappaTableRatios{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
inline constexpr std::array<double, 19> kPretestTableProducts{1,  2,  3,  4,  5,  6,  7,
                                                              8,  9,  10, 20, 30, 40, 50,
                                                              60, 70, 80, 90, 100};

inline std::vector<KappaTableRow> kappa_table(const HeuristicConstant& c = {}) {
    std::vector<KappaTableRow> rows;
    for (double k : kKappaTableRatios) {
        const LikelihoodRatio kappa(k);
        rows.push_back({k, mcgee_delta(kappa, c),
                        required_pretest(Probability(1.0), kappa, c).value.value(),
                        required_pretest(Probability(0.5), kappa, c).value.value()});
    }
    return rows;
}

inline std::vector<PretestTableRow> pretest_table(const HeuristicConstant& c = {}) {
    std::vector<PretestTableRow> rows;
    for (double k : kPretestTableProducts) {
        FindingSet fs;
        fs.findings.emplace_back("product", k);
        const PretestEstimate est = pretest_estimate(fs, c);
        rows.push_back({k, est.mean.value(), est.min_bound.value(), est.max_bound.value()});
    }
    return rows;
}

}  // namespace bayescreen

// Turns a handful of findings into a pretest estimate, then updates it with a
// test result both exactly and with the linear bedside rule.

#include <cstdio>

#include "bayescreen/heuristics.hpp"
#include "bayescreen/screening.hpp"

using namespace bayescreen;

int main() {
    FindingSet fs;
    fs.findings.emplace_back("fever", 2.0);
    fs.findings.emplace_back("rash", 5.0);
    const PretestEstimate est = pretest_estimate(fs);
    std::printf("pretest: mean %.3f, range [%.3f, %.3f]\n", est.mean.value(), est.min_bound.value(),
                est.max_bound.value());

    const TestCharacteristics test(0.85, 0.9);
    const LikelihoodRatio kappa = positive_lr(test);
    const Probability exact = posttest_exact(est.mean, kappa);
    const HeuristicValue linear = mcgee_posttest(est.mean, kappa);
    std::printf("positive test (LR+ %.2f): exact %.3f, linear %.3f%s\n", kappa.value(), exact.value(),
                linear.value.value(), linear.clamped ? " (clamped)" : "");
    std::printf("prevalence threshold of the test: %.3f\n", prevalence_threshold(test).value());
}

// Estimates prevalence from 30 positives in 100 screened with an imperfect
// test, first with known accuracy and then with accuracy learned from a
// validation study.

#include <cstdio>

#include "bayescreen/density.hpp"
#include "bayescreen/estimators.hpp"

using namespace bayescreen;

namespace {

void report(const char* label, const DensityGrid& d) {
    const PosteriorSummary s = posterior_summary(d);
    std::printf("%-22s mean %.4f  mode %.4f  95%% interval [%.4f, %.4f]\n", label, s.mean, s.mode, s.lower,
                s.upper);
}

}  // namespace

int main() {
    const CohortObservation obs(100, 30);
    const TestCharacteristics test(0.9, 0.9);

    const IntervalEstimate rg = rogan_gladen(obs, test);
    std::printf("%-22s point %.4f  95%% interval [%.4f, %.4f]\n", "rogan-gladen", rg.point.value(),
                rg.lower.value(), rg.upper.value());

    report("known accuracy", baxter_posterior_known(obs, test));

    const ValidationData val(200, 180, 200, 20);
    report("validated accuracy",
           baxter_posterior_unknown(obs, val, BetaParams::uniform(), BetaParams::uniform()));
}

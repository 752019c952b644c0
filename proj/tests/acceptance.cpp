// Acceptance suite: one PASS/FAIL line per criterion with its runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bayescreen/estimators.hpp"
#include "bayescreen/heuristics.hpp"
#include "bayescreen/screening.hpp"
#include "bayescreen/simulator.hpp"
#include "bayescreen/tables.hpp"
#include "reference_tables.hpp"

using namespace bayescreen;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Outcome()> check;
};

SimConfig config(std::uint64_t n, double phi, double a, double b, std::uint64_t seed,
                 std::uint64_t replicates) {
    SimConfig cfg;
    cfg.n = n;
    cfg.true_prevalence = Probability(phi);
    cfg.test = TestCharacteristics(a, b);
    cfg.seed = seed;
    cfg.replicates = replicates;
    return cfg;
}

std::size_t argmax(const DensityGrid& d) {
    return static_cast<std::size_t>(std::max_element(d.values.begin(), d.values.end()) -
                                    d.values.begin());
}

Outcome kappa_table_check() {
    const auto rows = kappa_table(HeuristicConstant::precise());
    if (rows.size() != reference::kKappaTable.size()) return {false, "row count"};
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& ref = reference::kKappaTable[i];
        if (rows[i].kappa != ref.kappa) return {false, "kappa column"};
        worst = std::max({worst, std::fabs(rows[i].delta - ref.delta),
                          std::fabs(rows[i].pretest_for_certainty - ref.pretest_for_certainty),
                          std::fabs(rows[i].pretest_for_even_odds - ref.pretest_for_even_odds)});
    }
    const auto& last = rows.back();
    char buf[160];
    std::snprintf(buf, sizeof buf, "10 rows, max |diff| %.5f, kappa=10: %.2f/%.2f/%.2f", worst,
                  last.delta, last.pretest_for_certainty, last.pretest_for_even_odds);
    return {worst <= 0.005, buf};
}

Outcome pretest_table_check() {
    const auto rows = pretest_table(HeuristicConstant::standard());
    if (rows.size() != reference::kPretestTable.size()) return {false, "row count"};
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& ref = reference::kPretestTable[i];
        if (rows[i].kappa_product != ref.kappa_product || rows[i].max != ref.max) {
            return {false, "product or max column"};
        }
        worst = std::max({worst, std::fabs(rows[i].mean - ref.mean), std::fabs(rows[i].min - ref.min)});
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "19 rows, max |diff| %.5f, 10: %.2f/%.2f, 100: %.2f/%.2f", worst,
                  rows[9].mean, rows[9].min, rows[18].mean, rows[18].min);
    return {worst <= 0.005, buf};
}

Outcome required_lr_check() {
    const double k = required_lr(Probability(0.0), Probability(0.5), HeuristicConstant::precise()).value();
    char buf[64];
    std::snprintf(buf, sizeof buf, "kappa* = %.4f", k);
    return {k >= 9.6 && k <= 9.8, buf};
}

Outcome crossing_check() {
    const double k5 = threshold_crossing_kappa(HeuristicConstant::rounded());
    const double k454 = threshold_crossing_kappa(HeuristicConstant::precise());
    char buf[96];
    std::snprintf(buf, sizeof buf, "divisor 5: %.4f, divisor 4.54: %.4f", k5, k454);
    return {k5 >= 4.5 && k5 <= 5.0 && k454 >= 4.2 && k454 <= 4.6, buf};
}

Outcome identity_check() {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> interior(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_ppv = 0.0;
    double worst_threshold = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const TestCharacteristics test(interior(gen), interior(gen));
        const Probability phi(unit(gen));
        const LikelihoodRatio kappa = positive_lr(test);
        worst_ppv = std::max(worst_ppv, std::fabs(ppv(test, phi).value() - posttest_exact(phi, kappa).value()));
        worst_threshold = std::max(worst_threshold, std::fabs(prevalence_threshold(test).value() -
                                                              threshold_from_lr(kappa).value()));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "1e5 pairs, max |diff| %.2e and %.2e", worst_ppv, worst_threshold);
    return {worst_ppv <= 1e-12 && worst_threshold <= 1e-12, buf};
}

Outcome conjugacy_check() {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> shape(1.0, 20.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const BetaParams prior(shape(gen), shape(gen));
        const auto n = std::uniform_int_distribution<std::uint64_t>(0, 500)(gen);
        const auto t = std::uniform_int_distribution<std::uint64_t>(0, n)(gen);
        const CohortObservation obs(n, t);
        const DensityGrid conjugate = beta_pdf(beta_update(prior, obs), 2048);
        const DensityGrid oracle =
            grid_bayes_oracle(obs, LikelihoodKind::Binomial, OracleParams{prior, {}}, 2048);
        for (std::size_t j = 0; j < oracle.size(); ++j) {
            worst = std::max(worst, std::fabs(oracle.values[j] - conjugate.values[j]));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "50 cases, max pointwise |diff| %.2e", worst);
    return {worst <= 1e-6, buf};
}

Outcome map_check() {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> acc(0.6, 0.99);
    int checked = 0;
    double worst_cells = 0.0;
    while (checked < 100) {
        const TestCharacteristics test(acc(gen), acc(gen));
        const auto n = std::uniform_int_distribution<std::uint64_t>(20, 2000)(gen);
        const auto t = std::uniform_int_distribution<std::uint64_t>(0, n)(gen);
        const double rg = rogan_gladen({n, t}, test).raw_point;
        if (!(rg > 0.02 && rg < 0.98)) continue;
        const DensityGrid d = baxter_posterior_known({n, t}, test);
        worst_cells = std::max(worst_cells, std::fabs(d.support[argmax(d)] - rg) / d.step());
        ++checked;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "100 cases, max offset %.3f grid cells", worst_cells);
    return {worst_cells <= 1.0, buf};
}

Outcome concentration_check() {
    const ValidationData val(100000, 90000, 100000, 10000);
    const CohortObservation obs(100, 30);
    const DensityGrid marginal = baxter_posterior_unknown(obs, val, BetaParams::uniform(), BetaParams::uniform());
    const DensityGrid known = baxter_posterior_known(obs, {0.9, 0.9});
    const double tv = total_variation(marginal, known);
    char buf[64];
    std::snprintf(buf, sizeof buf, "TV = %.5f", tv);
    return {tv < 0.02, buf};
}

Outcome recovery_check() {
    const CoverageReport recovery = coverage_experiment(config(10000, 0.1, 0.9, 0.8, 2718, 1000));
    const CoverageReport perfect = coverage_experiment(config(1000, 0.3, 1.0, 1.0, 3141, 1000));
    const bool ok = std::fabs(recovery.mean_point - 0.1) <= 0.01 && std::fabs(perfect.coverage - 0.95) <= 0.02;
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean point %.5f (truth 0.1), coverage %.3f", recovery.mean_point,
                  perfect.coverage);
    return {ok, buf};
}

Outcome audit_check() {
    const auto pretests = uniform_grid(0.1, 0.9, 801);
    const auto kappas = uniform_grid(1.0, 10.0, 9001);
    const AuditSurface s = heuristic_audit(pretests, kappas);
    char buf[96];
    std::snprintf(buf, sizeof buf, "max error %.6f at pretest %.3f, kappa %.3f", s.max_error, s.argmax_pretest,
                  s.argmax_kappa);
    return {std::fabs(s.max_error - reference::kAuditMaxError) <= 1e-4, buf};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"kappa table regeneration", 1.0, kappa_table_check},
        {"pretest table regeneration", 1.0, pretest_table_check},
        {"likelihood ratio for certainty from zero", 0.001, required_lr_check},
        {"threshold crossing", 0.01, crossing_check},
        {"ppv and threshold identities", 1.0, identity_check},
        {"conjugate posterior against grid oracle", 5.0, conjugacy_check},
        {"posterior mode equals rogan-gladen", 10.0, map_check},
        {"unknown-parameter concentration", 60.0, concentration_check},
        {"estimator recovery and coverage", 30.0, recovery_check},
        {"heuristic audit golden", 5.0, audit_check},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, ""};
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.budget_seconds;
        const bool pass = outcome.ok && in_time;
        if (!pass) ++failures;
        std::printf("%s  %-42s  %10.6f s (limit %g s)%s  %s\n", pass ? "PASS" : "FAIL", c.name.c_str(), seconds,
                    c.budget_seconds, in_time ? "" : " over budget", outcome.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

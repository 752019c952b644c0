#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "bayescreen/simulator.hpp"

using namespace bayescreen;
using Catch::Matchers::WithinAbs;

namespace {

SimConfig config(std::uint64_t n, double phi, double a, double b, std::uint64_t seed = 0,
                 std::uint64_t replicates = 1) {
    SimConfig cfg;
    cfg.n = n;
    cfg.true_prevalence = Probability(phi);
    cfg.test = TestCharacteristics(a, b);
    cfg.seed = seed;
    cfg.replicates = replicates;
    return cfg;
}

}  // namespace

TEST_CASE("generator is the standard 64-bit mersenne twister") {
    std::mt19937_64 engine;
    engine.discard(9999);
    CHECK(engine() == 9981545732273789042ULL);
    CHECK(std::mt19937_64(42)() == 13930160852258120406ULL);
    CHECK(std::mt19937_64(1)() == 2469588189546311528ULL);
}

TEST_CASE("seeded replicates match the independent oracle") {
    // tests/oracles/simulation_oracle.py
    const SimResult r = simulate(config(1000, 0.3, 0.9, 0.8, 42, 3));
    REQUIRE(r.replicates.size() == 3);
    CHECK(r.replicates[0] == Confusion{273, 146, 558, 23});
    CHECK(r.replicates[1] == Confusion{289, 129, 551, 31});
    CHECK(r.replicates[2] == Confusion{297, 133, 542, 28});
    CHECK(r.t == 419);
    CHECK(r.confusion == r.replicates[0]);
}

TEST_CASE("identical configurations give identical results") {
    const SimConfig cfg = config(5000, 0.17, 0.83, 0.91, 7, 20);
    CHECK(simulate(cfg) == simulate(cfg));
    SimConfig other = cfg;
    other.seed = 8;
    CHECK_FALSE(simulate(other) == simulate(cfg));
}

TEST_CASE("replicates can be generated in any order") {
    const SimConfig cfg = config(800, 0.4, 0.7, 0.75, 123, 16);
    const SimResult serial = simulate(cfg);
    for (std::uint64_t r = cfg.replicates; r-- > 0;) {
        REQUIRE(simulate_replicate(cfg, r) == serial.replicates[r]);
    }
}

TEST_CASE("confusion counts are consistent") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const auto n = std::uniform_int_distribution<std::uint64_t>(1, 3000)(gen);
        const SimResult r = simulate(config(n, u(gen), u(gen), u(gen), gen(), 3));
        for (const Confusion& c : r.replicates) {
            REQUIRE(c.total() == n);
            REQUIRE(c.tp + c.fp == c.positives());
        }
        REQUIRE(r.t == r.confusion.tp + r.confusion.fp);
    }
}

TEST_CASE("edge configurations") {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
        const SimResult none = simulate(config(1000, 0.0, 0.7, 1.0, seed, 5));
        for (const auto& c : none.replicates) CHECK(c.positives() == 0);
        const SimResult all = simulate(config(1000, 1.0, 1.0, 0.3, seed, 5));
        for (const auto& c : all.replicates) CHECK(c.positives() == 1000);
    }
    CHECK_THROWS_AS(simulate(config(0, 0.5, 0.9, 0.9)), InvalidArgument);
    CHECK_THROWS_AS(simulate(config(10, 0.5, 0.9, 0.9, 0, 0)), InvalidArgument);
}

TEST_CASE("positive fraction concentrates on the apparent prevalence") {
    const SimResult r = simulate(config(1000000, 0.25, 0.9, 0.9, 2024));
    const double apparent = 0.9 * 0.25 + 0.1 * 0.75;
    const double rate = static_cast<double>(r.t) / 1e6;
    CHECK(std::fabs(rate - apparent) <= 3.0 * std::sqrt(apparent * (1.0 - apparent) / 1e6));
}

TEST_CASE("simulated negative predictive value agrees with the closed form") {
    const SimResult r = simulate(config(2000000, 0.1, 0.9, 0.9, 77));
    const Confusion& c = r.confusion;
    const double negatives = static_cast<double>(c.tn + c.fn);
    const double empirical = static_cast<double>(c.tn) / negatives;
    const double expected = npv({0.9, 0.9}, Probability(0.1)).value();
    CHECK_THAT(expected, WithinAbs(0.987805, 1e-6));
    CHECK(std::fabs(empirical - expected) <= 4.0 * std::sqrt(expected * (1.0 - expected) / negatives));
}

TEST_CASE("replicate table") {
    std::ostringstream out;
    write_replicate_table(out, simulate(config(1000, 0.3, 0.9, 0.8, 42, 2)));
    CHECK(out.str() == "replicate,t,TP,FP,TN,FN\n0,419,273,146,558,23\n1,418,289,129,551,31\n");
}

TEST_CASE("rogan-gladen recovers the truth on average") {
    const SimConfig cfg = config(10000, 0.1, 0.9, 0.8, 31337, 1000);
    const CoverageReport rep = coverage_experiment(cfg);
    CHECK(rep.replicates == 1000);
    CHECK_THAT(rep.mean_point, WithinAbs(0.1, 0.01));
}

TEST_CASE("wald coverage with a perfect test") {
    const CoverageReport rep = coverage_experiment(config(1000, 0.3, 1.0, 1.0, 555, 1000));
    CHECK_THAT(rep.coverage, WithinAbs(0.95, 0.02));
    CHECK(rep.clamp_rate == 0.0);
}

TEST_CASE("coverage bookkeeping at the boundary") {
    const CoverageReport zero = coverage_experiment(config(500, 0.0, 0.9, 0.9, 3, 200));
    CHECK(zero.clamp_rate > 0.0);
    CHECK(zero.clamp_rate <= 1.0);
    const CoverageReport single = coverage_experiment(config(200, 0.3, 0.9, 0.9, 3, 1));
    CHECK((single.coverage == 0.0 || single.coverage == 1.0));
}

TEST_CASE("grid oracle reproduces the conjugate posterior") {
    const DensityGrid oracle =
        grid_bayes_oracle({10, 3}, LikelihoodKind::Binomial, OracleParams{}, 2048);
    const DensityGrid conjugate = beta_pdf(BetaParams(4.0, 8.0), 2048);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        REQUIRE_THAT(oracle.values[i], WithinAbs(conjugate.values[i], 1e-6));
    }
}

TEST_CASE("grid oracle reductions") {
    const DensityGrid plain = grid_bayes_oracle({40, 12}, LikelihoodKind::Binomial, OracleParams{}, 512);
    const DensityGrid perfect = grid_bayes_oracle(
        {40, 12}, LikelihoodKind::Transformed, OracleParams{BetaParams::uniform(), TestCharacteristics(1.0, 1.0)}, 512);
    for (std::size_t i = 0; i < plain.size(); ++i) REQUIRE_THAT(perfect.values[i], WithinAbs(plain.values[i], 1e-12));

    const DensityGrid prior_only =
        grid_bayes_oracle({0, 0}, LikelihoodKind::Binomial, OracleParams{BetaParams(2.0, 2.0), {}}, 512);
    const DensityGrid prior = beta_pdf(BetaParams(2.0, 2.0), 512);
    for (std::size_t i = 0; i < prior.size(); ++i) REQUIRE_THAT(prior_only.values[i], WithinAbs(prior.values[i], 1e-12));

    CHECK_THROWS_AS(grid_bayes_oracle({10, 3}, LikelihoodKind::Binomial, OracleParams{}, 128), InvalidArgument);
    CHECK_THROWS_AS(grid_bayes_oracle({10, 3}, LikelihoodKind::Transformed, OracleParams{}, 512), InvalidArgument);
}

TEST_CASE("known-parameter posterior agrees with the transformed oracle") {
    std::mt19937_64 gen(64);
    std::uniform_real_distribution<double> acc(0.55, 0.99);
    for (int i = 0; i < 20; ++i) {
        const TestCharacteristics test(acc(gen), acc(gen));
        const auto n = std::uniform_int_distribution<std::uint64_t>(1, 500)(gen);
        const auto t = std::uniform_int_distribution<std::uint64_t>(0, n)(gen);
        const DensityGrid known = baxter_posterior_known({n, t}, test, 2048);
        const DensityGrid oracle = grid_bayes_oracle(
            {n, t}, LikelihoodKind::Transformed, OracleParams{BetaParams::uniform(), test}, 2048);
        REQUIRE(total_variation(known, oracle) < 1e-3);
    }
}

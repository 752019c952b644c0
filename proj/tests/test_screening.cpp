#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bayescreen/screening.hpp"

using namespace bayescreen;
using Catch::Matchers::WithinAbs;

namespace {

Probability P(double v) { return Probability(v); }
LikelihoodRatio K(double v) { return LikelihoodRatio(v); }

}  // namespace

TEST_CASE("ppv examples") {
    CHECK_THAT(ppv({0.6, 0.95}, P(0.22401)).value(), WithinAbs(0.776, 0.001));
    CHECK(ppv({0.6, 0.95}, P(1.0)).value() == 1.0);
    CHECK(ppv({0.3, 0.4}, P(1.0)).value() == 1.0);
    CHECK(ppv({0.6, 0.95}, P(0.0)).value() == 0.0);
    CHECK(ppv({0.0, 0.7}, P(0.0)).value() == 0.0);
}

TEST_CASE("ppv degenerate corners") {
    CHECK_THROWS_AS(ppv({0.0, 1.0}, P(0.5)), DegenerateTest);
    CHECK_THROWS_AS(ppv({0.0, 1.0}, P(0.0)), DegenerateTest);
    CHECK(ppv({0.8, 1.0}, P(0.0)).value() == 0.0);
    CHECK(ppv({0.8, 1.0}, P(0.3)).value() == 1.0);
}

TEST_CASE("npv examples") {
    CHECK(npv({1.0, 1.0}, P(0.5)).value() == 1.0);
    // 0.81 / (0.81 + 0.01)
    CHECK_THAT(npv({0.9, 0.9}, P(0.1)).value(), WithinAbs(0.81 / 0.82, 1e-12));
    CHECK_THAT(npv({0.9, 0.9}, P(0.1)).value(), WithinAbs(0.987805, 1e-6));
    CHECK(npv({0.3, 0.2}, P(0.0)).value() == 1.0);
    CHECK_THROWS_AS(npv({1.0, 0.0}, P(0.5)), DegenerateTest);
}

TEST_CASE("positive likelihood ratio") {
    CHECK_THAT(positive_lr({0.9, 0.9}).value(), WithinAbs(9.0, 1e-12));
    CHECK(positive_lr({0.5, 0.5}).value() == 1.0);
    CHECK(positive_lr({0.95, 1.0}).is_infinite());
    CHECK_THROWS_AS(positive_lr({0.0, 1.0}), UndefinedRatio);
    CHECK(positive_lr({0.0, 0.5}).value() == 0.0);
}

TEST_CASE("likelihood ratio products") {
    CHECK((K(2.0) * K(5.0)).value() == 10.0);
    CHECK((K(2.0) * LikelihoodRatio::infinite()).is_infinite());
    CHECK_THROWS_AS(K(0.0) * LikelihoodRatio::infinite(), UndefinedRatio);
    CHECK_THROWS_AS(K(-1.0), InvalidArgument);
}

TEST_CASE("prevalence threshold examples") {
    CHECK_THAT(prevalence_threshold({0.6, 0.95}).value(), WithinAbs(0.2240, 0.0005));
    CHECK(prevalence_threshold({0.5, 0.5}).value() == 0.5);
    CHECK(prevalence_threshold({1.0, 1.0}).value() == 0.0);
    CHECK_THROWS_AS(prevalence_threshold({0.0, 1.0}), DegenerateTest);
}

TEST_CASE("ppv at threshold examples") {
    CHECK_THAT(ppv_at_threshold({0.6, 0.95}).value(), WithinAbs(0.776, 0.001));
    CHECK_THAT(ppv_at_threshold({0.5, 0.5}).value(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(ppv_at_threshold({1.0, 0.99}).value(), WithinAbs(0.909, 0.001));
    CHECK_THROWS_AS(ppv_at_threshold({0.7, 1.0}), DegenerateTest);
}

TEST_CASE("threshold from likelihood ratio") {
    CHECK(threshold_from_lr(K(1.0)).value() == 0.5);
    CHECK_THAT(threshold_from_lr(K(4.0)).value(), WithinAbs(1.0 / 3.0, 1e-15));
    CHECK_THAT(threshold_from_lr(K(9.0)).value(), WithinAbs(0.25, 1e-15));
    CHECK_THAT(threshold_from_lr(K(9.0)).value(),
               WithinAbs(prevalence_threshold({0.9, 0.9}).value(), 1e-12));
    CHECK_THROWS_AS(threshold_from_lr(K(0.0)), InvalidArgument);
    CHECK_THROWS_AS(threshold_from_lr(LikelihoodRatio::infinite()), InvalidArgument);
}

TEST_CASE("exact posttest examples") {
    CHECK(posttest_exact(P(0.5), K(1.0)).value() == 0.5);
    CHECK_THAT(posttest_exact(P(0.2), K(4.0)).value(), WithinAbs(0.5, 1e-15));
    CHECK(posttest_exact(P(1.0), K(0.3)).value() == 1.0);
    CHECK(posttest_exact(P(1.0), K(250.0)).value() == 1.0);
    CHECK(posttest_exact(P(0.01), LikelihoodRatio::infinite()).value() == 1.0);
    CHECK(posttest_exact(P(0.0), K(50.0)).value() == 0.0);
}

TEST_CASE("ppv curve") {
    const CurveSeries perfect = ppv_curve({1.0, 1.0}, 3);
    REQUIRE(perfect.points.size() == 3);
    CHECK(perfect.points[0].x == 0.0);
    CHECK(perfect.points[0].y == 0.0);
    CHECK(perfect.points[1].y == 1.0);
    CHECK(perfect.points[2].x == 1.0);
    CHECK(perfect.points[2].y == 1.0);

    const CurveSeries identity = ppv_curve({0.5, 0.5}, 11);
    for (const auto& p : identity.points) CHECK_THAT(p.y, WithinAbs(p.x, 1e-15));

    const CurveSeries c = ppv_curve({0.6, 0.95}, 101);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        CHECK(c.points[i].x > c.points[i - 1].x);
        CHECK(c.points[i].y >= c.points[i - 1].y);
    }
    CHECK_THAT(ppv({0.6, 0.95}, P(0.22401)).value(), WithinAbs(0.776, 0.001));
    CHECK_THROWS_AS(ppv_curve({0.6, 0.95}, 1), InvalidArgument);
    CHECK_THROWS_AS(ppv_curve({0.0, 1.0}, 5), DegenerateTest);
}

TEST_CASE("fagan coordinates") {
    const FaganLine even = fagan_coordinates(P(0.5), K(1.0));
    CHECK(even.left == 0.0);
    CHECK(even.mid == 0.0);
    CHECK_THAT(even.right, WithinAbs(0.0, 1e-15));

    CHECK_THAT(fagan_coordinates(P(0.5), K(10.0)).right, WithinAbs(2.302585, 1e-6));

    const FaganLine low = fagan_coordinates(P(0.09), K(10.0));
    CHECK_THAT(low.posttest.value(), WithinAbs(0.4972, 1e-4));
    CHECK_THAT(low.right, WithinAbs(logit(low.posttest), 1e-12));
    CHECK_THAT(low.right, WithinAbs(-low.left + low.mid, 1e-12));

    CHECK_THROWS_AS(fagan_coordinates(P(0.0), K(2.0)), BoundaryLogit);
}

TEST_CASE("screening invariants over randomized triples") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> interior(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> log_kappa(-6.0, 6.0);
    for (int i = 0; i < 20000; ++i) {
        const TestCharacteristics test(interior(gen), interior(gen));
        double lo = u(gen);
        double hi = u(gen);
        if (lo > hi) std::swap(lo, hi);
        const double p_lo = ppv(test, P(lo)).value();
        const double p_hi = ppv(test, P(hi)).value();
        REQUIRE(p_lo >= 0.0);
        REQUIRE(p_hi <= 1.0);
        REQUIRE(p_lo <= p_hi + 1e-15);

        REQUIRE_THAT(ppv(test, prevalence_threshold(test)).value(),
                     WithinAbs(ppv_at_threshold(test).value(), 1e-12));
        REQUIRE_THAT(prevalence_threshold(test).value(),
                     WithinAbs(threshold_from_lr(positive_lr(test)).value(), 1e-12));

        const Probability phi(interior(gen));
        const LikelihoodRatio k1(std::exp(log_kappa(gen)));
        const LikelihoodRatio k2(std::exp(log_kappa(gen)));
        REQUIRE_THAT(posttest_exact(posttest_exact(phi, k1), k2).value(),
                     WithinAbs(posttest_exact(phi, k1 * k2).value(), 1e-12));

        // Away from the ends, where logit itself is well conditioned.
        const Probability mid(std::uniform_real_distribution<double>(1e-3, 1.0 - 1e-3)(gen));
        const double lk = std::uniform_real_distribution<double>(-4.0, 4.0)(gen);
        REQUIRE_THAT(logit(posttest_exact(mid, LikelihoodRatio(std::exp(lk)))),
                     WithinAbs(logit(mid) + lk, 1e-10));
    }
}

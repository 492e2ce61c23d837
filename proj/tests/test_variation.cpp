#include <doctest.h>

#include <cmath>

#include "mggpo/rng.hpp"
#include "mggpo/variation.hpp"
#include "oracles.hpp"

using namespace mggpo;
using namespace mggpo::variation;

namespace {

DecisionVector random_point(RngStream& rng, std::size_t p) {
    DecisionVector x(p);
    for (double& v : x) v = rng.uniform();
    return x;
}

} // namespace

TEST_CASE("sbx leaves identical parents alone") {
    RngStream rng(1);
    const auto p = random_point(rng, 30);
    for (int t = 0; t < 100; ++t) {
        const auto [a, b] = sbx_crossover(p, p, SbxOptions{20.0, 1.0}, rng);
        CHECK(a == p);
        CHECK(b == p);
    }
}

TEST_CASE("sbx preserves the midpoint of every unclipped variable") {
    RngStream rng(2);
    double worst = 0.0;
    for (int t = 0; t < 20000; ++t) {
        const auto p1 = random_point(rng, 10), p2 = random_point(rng, 10);
        const auto [a, b] = sbx_crossover(p1, p2, SbxOptions{rng.uniform(1.0, 30.0), 1.0}, rng);
        for (std::size_t i = 0; i < 10; ++i) {
            if (a[i] == 0.0 || a[i] == 1.0 || b[i] == 0.0 || b[i] == 1.0) continue;
            worst = std::max(worst, std::abs((a[i] + b[i]) - (p1[i] + p2[i])) / 2.0);
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("sbx spread factor follows its density") {
    RngStream rng(3);
    const std::size_t draws = 100000;
    double sum = 0.0;
    std::size_t below_one = 0;
    for (std::size_t t = 0; t < draws; ++t) {
        const auto [a, b] = sbx_crossover({0.2}, {0.8}, SbxOptions{20.0, 1.0}, rng);
        const double beta = std::abs(b[0] - a[0]) / 0.6;
        sum += beta;
        below_one += beta <= 1.0;
    }
    const double frac = static_cast<double>(below_one) / draws;
    CHECK(std::abs(frac - 0.5) < 3.0 * std::sqrt(0.25 / draws));
    const double expect = oracle::sbx_beta_mean(20.0);
    CHECK(expect == doctest::Approx(1.00227).epsilon(1e-5));
    CHECK(std::abs(sum / draws - expect) < 0.01 * expect);
}

TEST_CASE("sbx spread endpoints") {
    CHECK(sbx_spread(0.5, 20.0) == 1.0);
    CHECK(sbx_spread(0.0, 20.0) == 0.0);
    CHECK(sbx_spread(0.25, 1.0) == doctest::Approx(std::sqrt(0.5)));
    CHECK(sbx_spread(0.75, 1.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sbx with zero per-variable rate copies the parents") {
    RngStream rng(4);
    const auto p1 = random_point(rng, 8), p2 = random_point(rng, 8);
    const auto [a, b] = sbx_crossover(p1, p2, SbxOptions{20.0, 0.0}, rng);
    CHECK(a == p1);
    CHECK(b == p2);
    CHECK_THROWS_AS((void)sbx_crossover(p1, DecisionVector(7, 0.5), SbxOptions{}, rng), DimensionError);
}

TEST_CASE("polynomial mutation") {
    RngStream rng(5);
    SUBCASE("no draws hit: output equals input") {
        const auto x = random_point(rng, 30);
        CHECK(polynomial_mutation(x, 20.0, 0.0, rng) == x);
    }
    SUBCASE("perturbations at the centre are unbiased and bounded") {
        for (auto bounds : {MutationBounds::bounded, MutationBounds::clipped}) {
            double sum = 0.0, widest = 0.0;
            for (int t = 0; t < 100000; ++t) {
                const double d = polynomial_mutation({0.5}, 20.0, 1.0, rng, bounds)[0] - 0.5;
                sum += d;
                widest = std::max(widest, std::abs(d));
            }
            CHECK(std::abs(sum / 100000) < 1e-3);
            CHECK(widest <= 0.5);
        }
    }
    SUBCASE("a variable on the lower bound only moves up") {
        for (auto bounds : {MutationBounds::bounded, MutationBounds::clipped}) {
            for (int t = 0; t < 10000; ++t) CHECK(polynomial_mutation({0.0}, 20.0, 1.0, rng, bounds)[0] >= 0.0);
        }
    }
    SUBCASE("bounded perturbation closed forms") {
        // u = 1/2 is the identity; the extremes reach the bounds exactly.
        CHECK(polynomial_perturb(0.3, 0.5, 20.0) == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(polynomial_perturb(0.3, 0.0, 20.0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(polynomial_perturb(0.3, 1.0, 20.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(polynomial_perturb(0.3, 0.25, 1.0, MutationBounds::clipped) == doctest::Approx(0.3 + std::sqrt(0.5) - 1.0));
    }
}

TEST_CASE("operators never leave the unit box over 1e6 applications") {
    RngStream rng(6);
    std::size_t violations = 0;
    for (int t = 0; t < 500000; ++t) {
        const auto p1 = random_point(rng, 2), p2 = random_point(rng, 2);
        const double eta = rng.uniform(0.5, 40.0);
        const auto [a, b] = sbx_crossover(p1, p2, SbxOptions{eta, 1.0}, rng);
        const auto m = polynomial_mutation(p1, eta, 1.0, rng, t % 2 ? MutationBounds::clipped : MutationBounds::bounded);
        for (const auto* v : {&a, &b, &m})
            for (double x : *v) violations += !(x >= 0.0 && x <= 1.0);
    }
    CHECK(violations == 0);
}

TEST_CASE("generate_candidates") {
    RngStream rng(7);
    std::vector<DecisionVector> parents;
    for (int i = 0; i < 80; ++i) parents.push_back(random_point(rng, 30));

    SUBCASE("N=80, m1=m2=20 gives 3200 candidates inside the box") {
        const auto c = generate_candidates(parents, VariationParams{}, rng);
        CHECK(c.size() == 3200);
        for (const auto& x : c) {
            REQUIRE(x.size() == 30);
            for (double v : x) REQUIRE((v >= 0.0 && v <= 1.0));
        }
    }
    SUBCASE("count is (m1 + m2) N for assorted multipliers") {
        for (std::size_t m1 : {0u, 1u, 3u})
            for (std::size_t m2 : {0u, 2u, 5u}) {
                VariationParams vp;
                vp.m1 = m1;
                vp.m2 = m2;
                CHECK(generate_candidates(parents, vp, rng).size() == (m1 + m2) * parents.size());
            }
    }
    SUBCASE("m1 = m2 = 0 gives nothing") {
        VariationParams vp;
        vp.m1 = vp.m2 = 0;
        CHECK(generate_candidates(parents, vp, rng).empty());
    }
    SUBCASE("a single parent crosses with itself") {
        VariationParams vp;
        vp.m1 = 0;
        vp.m2 = 10;
        const std::vector<DecisionVector> one{parents[0]};
        for (const auto& c : generate_candidates(one, vp, rng)) CHECK(c == parents[0]);
    }
    SUBCASE("same seed, same batch") {
        RngStream a(99), b(99);
        CHECK(generate_candidates(parents, VariationParams{}, a) == generate_candidates(parents, VariationParams{}, b));
    }
    SUBCASE("parameter validation") {
        VariationParams vp;
        vp.eta_c = 0.0;
        CHECK_THROWS_AS(vp.validate(), ConfigError);
        vp = {};
        vp.p_mut = 1.5;
        CHECK_THROWS_AS(vp.validate(), ConfigError);
        vp = {};
        CHECK(vp.mutation_rate(30) == doctest::Approx(0.15));
        CHECK(vp.mutation_rate(4) == doctest::Approx(0.25));
        vp.p_mut = 0.05;
        CHECK(vp.mutation_rate(30) == doctest::Approx(0.05));
    }
}

#include <mlcc/baselines.hpp>
#include <mlcc/exact.hpp>

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace mlcc;

TEST_CASE("pick_a_best with one layer is the single-layer region growing output") {
    auto inst = testutil::random_general_instance(6, 1, 10);
    auto relax = solve_relaxation(inst, NormSpec::lp(1));
    CHECK(pick_a_best(inst, NormSpec::lp(1)) == region_grow(inst, relax));
}

TEST_CASE("pick_a_best over identical layers matches the single-layer run") {
    auto layer = testutil::random_general_instance(5, 1, 20);
    MultilayerInstance doubled(5, 2, Mode::general);
    for (const auto& [key, w] : layer.stored(0)) {
        doubled.set_weights(0, key.first, key.second, w.plus, w.minus);
        doubled.set_weights(1, key.first, key.second, w.plus, w.minus);
    }
    CHECK(pick_a_best(doubled, NormSpec::linf()) == pick_a_best(layer, NormSpec::linf()));
}

TEST_CASE("pick_a_best rejects probability mode") {
    auto inst = testutil::random_probability_instance(4, 2, 1);
    CHECK_THROWS_AS(pick_a_best(inst, NormSpec::lp(1)), std::invalid_argument);
}

TEST_CASE("sum_layers adds matching pairs across layers") {
    MultilayerInstance inst(3, 2, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);
    inst.set_weights(1, 0, 1, 1.0, 0.0);
    auto summed = sum_layers(inst);
    CHECK(summed.num_layers() == 1);
    CHECK(summed.weights(0, 0, 1).plus == doctest::Approx(2.0));
}

TEST_CASE("aggregate p=1 objective equals the aggregated-layer disagreement") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto inst = testutil::random_general_instance(6, 3, 30 + seed);
        auto clustering = aggregate(inst, NormSpec::lp(1));
        const auto summed = sum_layers(inst);
        CHECK(objective(inst, clustering, NormSpec::lp(1)) ==
              doctest::Approx(disagreement(summed, clustering, 0)).epsilon(1e-12));
    }
}

TEST_CASE("aggregate p=1 objective is certified against the aggregated bound") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Index n = 5 + static_cast<Index>(seed % 3);
        auto inst = testutil::random_general_instance(n, 2, 40 + seed);
        auto clustering = aggregate(inst, NormSpec::lp(1));
        auto [canon, offsets] = canonicalize_general(sum_layers(inst));
        auto relax = solve_relaxation(canon, NormSpec::lp(1));
        const double c = 3.0;
        const double factor =
            std::max(2.0 * c * std::log(static_cast<double>(n) + 1.0), c / (c - 2.0));
        const double aggregated_lb = relax.lower_bound + offsets.sum();
        CHECK(objective(inst, clustering, NormSpec::lp(1)) <=
              factor * aggregated_lb + 1e-6 * (1.0 + factor * aggregated_lb));
    }
}

TEST_CASE("averaging layers preserves the probability constraint exactly") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto inst = testutil::random_probability_instance(6, 3, 50 + seed);
        auto averaged = average_layers(inst);
        CHECK(averaged.num_layers() == 1);
        CHECK(validate(averaged).empty());
    }
}

TEST_CASE("averaging identical layers reproduces the layer") {
    auto layer = testutil::random_probability_instance(5, 1, 60);
    MultilayerInstance tripled(5, 3, Mode::probability);
    for (const auto& [key, w] : layer.stored(0))
        for (Index ell = 0; ell < 3; ++ell)
            tripled.set_weights(ell, key.first, key.second, w.plus, w.minus);
    auto averaged = average_layers(tripled);
    for (Index u = 0; u < 5; ++u)
        for (Index v = u + 1; v < 5; ++v)
            CHECK(averaged.weights(0, u, v).plus ==
                  doctest::Approx(layer.weights(0, u, v).plus).epsilon(1e-15));
}

TEST_CASE("aggregate_pr supports both pivot variants reproducibly") {
    auto inst = testutil::random_probability_instance(6, 2, 70);
    for (auto variant : {AggregatePrVariant::lp_kwik, AggregatePrVariant::kwik}) {
        auto a = aggregate_pr(inst, NormSpec::linf(), variant, 9);
        auto b = aggregate_pr(inst, NormSpec::linf(), variant, 9);
        CHECK(a == b);
        CHECK(a.n() == 6);
    }
    CHECK_THROWS_AS(aggregate_pr(testutil::random_general_instance(4, 2, 0), NormSpec::linf(),
                                 AggregatePrVariant::kwik, 1),
                    std::invalid_argument);
}

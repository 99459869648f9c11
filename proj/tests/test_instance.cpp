#include <mlcc/exact.hpp>
#include <mlcc/instance.hpp>

#include "test_util.hpp"

#include <doctest.h>

#include <sstream>

using namespace mlcc;

TEST_CASE("validate accepts a clean probability instance") {
    MultilayerInstance inst(3, 1, Mode::probability);
    for (Index u = 0; u < 3; ++u)
        for (Index v = u + 1; v < 3; ++v) inst.set_weights(0, u, v, 0.6, 0.4);
    CHECK(validate(inst).empty());
}

TEST_CASE("validate flags a probability-sum violation") {
    MultilayerInstance inst(3, 1, Mode::probability);
    inst.set_weights(0, 0, 1, 0.6, 0.6);
    auto violations = validate(inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == Violation::Kind::probability_sum);
    CHECK(violations[0].u == 0);
    CHECK(violations[0].v == 1);
}

TEST_CASE("validate flags coexisting labels in general mode") {
    MultilayerInstance inst(2, 1, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 1.0);
    auto violations = validate(inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == Violation::Kind::coexistence);
}

TEST_CASE("validate checks the triangle constraint on w-") {
    MultilayerInstance inst(3, 1, Mode::probability_triangle);
    inst.set_weights(0, 0, 1, 0.9, 0.1);
    inst.set_weights(0, 1, 2, 0.9, 0.1);
    inst.set_weights(0, 0, 2, 0.1, 0.9);  // 0.9 > 0.1 + 0.1
    auto violations = validate(inst);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == Violation::Kind::triangle);
}

TEST_CASE("triangle validation accepts a metric-like layer") {
    MultilayerInstance inst(3, 1, Mode::probability_triangle);
    inst.set_weights(0, 0, 1, 0.9, 0.1);
    inst.set_weights(0, 1, 2, 0.9, 0.1);
    inst.set_weights(0, 0, 2, 0.8, 0.2);
    CHECK(validate(inst).empty());
}

TEST_CASE("disagreement charges exactly the misclassified weights") {
    MultilayerInstance inst(3, 1, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);
    inst.set_weights(0, 0, 2, 0.0, 1.0);
    const Clustering together = Clustering::from_clusters(3, {{0, 1}, {2}});
    CHECK(disagreement(inst, together, 0) == doctest::Approx(0.0));
    CHECK(disagreement(inst, Clustering::singletons(3), 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(disagreement(inst, together, 1), std::out_of_range);
}

TEST_CASE("probability defaults charge 0.5 per pair under any clustering") {
    MultilayerInstance inst(3, 1, Mode::probability);  // all pairs unlisted
    CHECK(disagreement(inst, Clustering::singletons(3), 0) == doctest::Approx(1.5));
    CHECK(disagreement(inst, Clustering::one_cluster(3), 0) == doctest::Approx(1.5));
}

TEST_CASE("objective reduces the disagreement vector by the requested norm") {
    Vector d(2);
    d << 3.0, 4.0;
    CHECK(NormSpec::lp(2).reduce(d) == doctest::Approx(5.0));
    CHECK(NormSpec::linf().reduce(d) == doctest::Approx(4.0));
    CHECK(NormSpec::lp(1).reduce(d) == doctest::Approx(7.0));
}

TEST_CASE("norm spec rejects p < 1 and p > 64") {
    CHECK_THROWS_AS(NormSpec::lp(0.5), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::lp(65.0), std::invalid_argument);
    CHECK(NormSpec::parse("inf").is_inf());
    CHECK(NormSpec::parse("2").p() == doctest::Approx(2.0));
}

TEST_CASE("canonicalize shifts the common mass into the offset") {
    MultilayerInstance inst(3, 1, Mode::general);
    inst.set_weights(0, 0, 1, 0.7, 0.3);
    auto [canon, offsets] = canonicalize_general(inst);
    CHECK(canon.weights(0, 0, 1).plus == doctest::Approx(0.4));
    CHECK(canon.weights(0, 0, 1).minus == doctest::Approx(0.0));
    CHECK(offsets[0] == doctest::Approx(0.3));
    CHECK(validate(canon).empty());
}

TEST_CASE("canonicalize leaves canonical instances unchanged") {
    auto inst = testutil::random_general_instance(5, 2, 7);
    auto [canon, offsets] = canonicalize_general(inst);
    CHECK(offsets.cwiseAbs().maxCoeff() == 0.0);
    for (Index ell = 0; ell < 2; ++ell)
        for (Index u = 0; u < 5; ++u)
            for (Index v = u + 1; v < 5; ++v) {
                CHECK(canon.weights(ell, u, v).plus == inst.weights(ell, u, v).plus);
                CHECK(canon.weights(ell, u, v).minus == inst.weights(ell, u, v).minus);
            }
}

TEST_CASE("canonicalize two-pair example and the disagreement identity") {
    MultilayerInstance inst(3, 1, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 1.0);
    inst.set_weights(0, 0, 2, 0.2, 0.5);
    auto [canon, offsets] = canonicalize_general(inst);
    CHECK(canon.weights(0, 0, 1).plus == doctest::Approx(0.0));
    CHECK(canon.weights(0, 0, 1).minus == doctest::Approx(0.0));
    CHECK(canon.weights(0, 0, 2).plus == doctest::Approx(0.0));
    CHECK(canon.weights(0, 0, 2).minus == doctest::Approx(0.3));
    CHECK(offsets[0] == doctest::Approx(1.2));  // 1 + 0.2 shifted off the two pairs

    // disagreement_orig = disagreement_canon + offset, for every partition.
    for_each_partition(3, [&](const std::vector<int>& rgs) {
        Clustering c(rgs);
        CHECK(disagreement(inst, c, 0) ==
              doctest::Approx(disagreement(canon, c, 0) + offsets[0]));
    });
}

TEST_CASE("canonicalization identity holds on random instances with coexistence") {
    rng::Engine gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 3 + static_cast<Index>(rng::uniform_index(gen, 4));
        const Index L = 1 + static_cast<Index>(rng::uniform_index(gen, 3));
        MultilayerInstance inst(n, L, Mode::general);
        for (Index ell = 0; ell < L; ++ell)
            for (Index u = 0; u < n; ++u)
                for (Index v = u + 1; v < n; ++v)
                    if (rng::bernoulli_half(gen))
                        inst.set_weights(ell, u, v, rng::uniform_real01(gen),
                                         rng::uniform_real01(gen));
        auto [canon, offsets] = canonicalize_general(inst);
        CHECK(validate(canon).empty());
        for_each_partition(n, [&](const std::vector<int>& rgs) {
            Clustering c(rgs);
            for (Index ell = 0; ell < L; ++ell) {
                CHECK(disagreement(inst, c, ell) ==
                      doctest::Approx(disagreement(canon, c, ell) + offsets[ell])
                          .epsilon(1e-12));
            }
        });
    }
}

TEST_CASE("canonicalize preserves the p=1 argmin set on small instances") {
    rng::Engine gen(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 3 + static_cast<Index>(rng::uniform_index(gen, 3));
        MultilayerInstance inst(n, 2, Mode::general);
        for (Index ell = 0; ell < 2; ++ell)
            for (Index u = 0; u < n; ++u)
                for (Index v = u + 1; v < n; ++v)
                    inst.set_weights(ell, u, v, rng::uniform_real01(gen),
                                     rng::uniform_real01(gen));
        auto [canon, offsets] = canonicalize_general(inst);
        auto orig = brute_force(inst, NormSpec::lp(1));
        auto shifted = brute_force(canon, NormSpec::lp(1));
        CHECK(orig.opt_value ==
              doctest::Approx(shifted.opt_value + offsets.sum()).epsilon(1e-12));
        REQUIRE(orig.opt_clusterings.size() == shifted.opt_clusterings.size());
        for (size_t i = 0; i < orig.opt_clusterings.size(); ++i)
            CHECK(orig.opt_clusterings[i] == shifted.opt_clusterings[i]);
    }
}

TEST_CASE("disagreement + agreement equals the layer total weight") {
    rng::Engine gen(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = trial % 2 == 0 ? testutil::random_general_instance(6, 2, 100 + trial)
                                   : testutil::random_probability_instance(6, 2, 100 + trial);
        std::vector<int> labels(6);
        for (auto& x : labels) x = static_cast<int>(rng::uniform_index(gen, 3));
        Clustering c(labels);
        for (Index ell = 0; ell < 2; ++ell) {
            double agreement = 0.0;
            for (Index u = 0; u < 6; ++u)
                for (Index v = u + 1; v < 6; ++v) {
                    auto w = inst.weights(ell, u, v);
                    agreement += c.same_cluster(u, v) ? w.plus : w.minus;
                }
            CHECK(disagreement(inst, c, ell) + agreement ==
                  doctest::Approx(inst.layer_total_weight(ell)).epsilon(1e-12));
        }
    }
}

TEST_CASE("disagreement is invariant under cluster relabeling") {
    auto inst = testutil::random_general_instance(5, 2, 23);
    Clustering a({0, 1, 0, 2, 1});
    Clustering b({2, 0, 2, 1, 0});  // same partition, different labels
    for (Index ell = 0; ell < 2; ++ell)
        CHECK(disagreement(inst, a, ell) == disagreement(inst, b, ell));
}

TEST_CASE("clustering normalizes ids and reports clusters by minimum element") {
    Clustering c({5, 5, 2, 2, 9});
    CHECK(c.num_clusters() == 3);
    CHECK(c.assignment() == std::vector<int>{0, 0, 1, 1, 2});
    auto clusters = c.clusters();
    REQUIRE(clusters.size() == 3);
    CHECK(clusters[0] == std::vector<int>{0, 1});
    CHECK(clusters[1] == std::vector<int>{2, 3});
    CHECK(clusters[2] == std::vector<int>{4});
}

TEST_CASE("instance files round-trip bit exactly") {
    auto inst = testutil::random_general_instance(6, 3, 31);
    std::ostringstream out;
    write_instance(inst, out);
    std::istringstream in(out.str());
    auto back = read_instance(in);
    CHECK(back.n() == inst.n());
    CHECK(back.num_layers() == inst.num_layers());
    CHECK(back.mode() == inst.mode());
    for (Index ell = 0; ell < 3; ++ell) {
        REQUIRE(back.stored(ell).size() == inst.stored(ell).size());
        for (const auto& [key, w] : inst.stored(ell)) {
            auto rw = back.weights(ell, key.first, key.second);
            CHECK(rw.plus == w.plus);    // bit exact
            CHECK(rw.minus == w.minus);  // bit exact
        }
    }
    std::ostringstream again;
    write_instance(back, again);
    CHECK(again.str() == out.str());
}

TEST_CASE("instance reader reports the offending line and handles comments") {
    std::istringstream ok("# comment\nmlcc probability n=2 L=1\n0 0 1 0.25 0.75 # inline\n");
    auto inst = read_instance(ok);
    CHECK(inst.weights(0, 0, 1).plus == doctest::Approx(0.25));

    std::istringstream bad("mlcc general n=2 L=1\n0 0 1 nope 0\n");
    CHECK_THROWS_WITH_AS(read_instance(bad),
                         doctest::Contains("line 2"), std::runtime_error);

    std::istringstream bad_layer("mlcc general n=2 L=1\n3 0 1 1.0 0\n");
    CHECK_THROWS_AS(read_instance(bad_layer), std::runtime_error);
}

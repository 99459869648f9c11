#include <mlcc/exact.hpp>
#include <mlcc/relax.hpp>

#include "reference_lp.hpp"
#include "reference_pg.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <sstream>

using namespace mlcc;

TEST_CASE("separate_triangles finds the classic violated triple") {
    PairIndexer idx(3);
    Vector x(3);
    x[idx(0, 2)] = 1.0;
    x[idx(0, 1)] = 0.2;
    x[idx(1, 2)] = 0.3;
    auto cuts = separate_triangles(x, 3, 1e-9, 100);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].i == 0);
    CHECK(cuts[0].j == 1);
    CHECK(cuts[0].k == 2);
    CHECK(cuts[0].violation == doctest::Approx(0.5));
}

TEST_CASE("separate_triangles certifies feasible points") {
    CHECK(separate_triangles(Vector::Zero(6), 4, 1e-9, 100).empty());
    CHECK(separate_triangles(Vector::Ones(6), 4, 1e-9, 100).empty());
}

TEST_CASE("separate_triangles respects max_cuts and sorts by violation") {
    PairIndexer idx(4);
    Vector x = Vector::Zero(6);
    x[idx(0, 1)] = 1.0;
    x[idx(2, 3)] = 0.6;
    auto all = separate_triangles(x, 4, 1e-9, 100);
    REQUIRE(all.size() >= 2);
    CHECK(all[0].violation >= all[1].violation);
    auto one = separate_triangles(x, 4, 1e-9, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].violation == doctest::Approx(all[0].violation));
}

TEST_CASE("two-element minimax relaxation splits the difference") {
    MultilayerInstance inst(2, 2, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);
    inst.set_weights(1, 0, 1, 0.0, 1.0);
    auto sol = solve_relaxation(inst, NormSpec::linf());
    CHECK(sol.lower_bound == doctest::Approx(0.5));
    CHECK(sol.metric(0, 1) == doctest::Approx(0.5));
    CHECK(sol.log.converged);
}

TEST_CASE("two-element single-plus p=1 relaxation reaches zero") {
    MultilayerInstance inst(2, 1, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);
    auto sol = solve_relaxation(inst, NormSpec::lp(1));
    CHECK(sol.lower_bound == doctest::Approx(0.0));
    CHECK(sol.metric(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("row-generated LP matches the fully enumerated LP") {
    // Three elements, two layers; compare against the explicit LP with every
    // triangle row present, solved by the vertex-enumeration reference.
    MultilayerInstance inst(3, 2, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);
    inst.set_weights(0, 1, 2, 0.0, 0.8);
    inst.set_weights(1, 0, 2, 0.7, 0.0);
    inst.set_weights(1, 0, 1, 0.0, 0.4);
    auto sol = solve_relaxation(inst, NormSpec::linf());

    const LayerCosts lc = layer_costs(inst);
    PairIndexer idx(3);
    LinearProgramSpec full = LinearProgramSpec::boxed(4);
    full.upper[3] = 10.0;
    full.objective[3] = 1.0;
    for (Index ell = 0; ell < 2; ++ell) {
        LinearRow row;
        for (Index j = 0; j < 3; ++j)
            if (lc.a(ell, j) != 0.0) row.coeffs.push_back({j, lc.a(ell, j)});
        row.coeffs.push_back({3, -1.0});
        row.rhs = -lc.b[ell];
        full.rows.push_back(row);
    }
    for (const auto& tri : testutil::all_triangle_rows(3))
        full.rows.push_back(
            {{{tri.ik, 1.0}, {tri.ij, -1.0}, {tri.jk, -1.0}}, RowSense::le, 0.0});
    auto ref = testutil::vertex_enumeration_optimum(full);
    REQUIRE(ref.has_value());
    CHECK(sol.lower_bound == doctest::Approx(*ref).epsilon(1e-7));
}

TEST_CASE("relaxation solutions are feasible and dominated by the exact optimum") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const Index n = 4 + static_cast<Index>(seed % 4);
        const Index L = 1 + static_cast<Index>(seed % 3);
        const bool probability = seed % 2 == 1;
        auto inst = probability ? testutil::random_probability_instance(n, L, 900 + seed)
                                : testutil::random_general_instance(n, L, 900 + seed);
        for (const auto& norm :
             {NormSpec::lp(1), NormSpec::lp(2), NormSpec::linf()}) {
            auto sol = solve_relaxation(inst, norm);
            CHECK(sol.metric.max_triangle_violation() <= 1e-6);
            CHECK(sol.metric.max_box_violation() <= 1e-6);
            auto exact = brute_force(inst, norm);
            CHECK(sol.lower_bound <= exact.opt_value + 1e-6);
            if (norm.is_inf()) {
                for (Index ell = 0; ell < L; ++ell)
                    CHECK(sol.per_layer_cost[ell] <= sol.lower_bound + 1e-6);
                CHECK(norm.reduce(sol.per_layer_cost) ==
                      doctest::Approx(sol.lower_bound).epsilon(1e-6));
            }
            if (!norm.is_inf() && norm.p() == 1.0)
                CHECK(norm.reduce(sol.per_layer_cost) ==
                      doctest::Approx(sol.lower_bound).epsilon(1e-6));
            ++checked;
        }
    }
    CHECK(checked == 36);
}

TEST_CASE("row generation values are monotone and max_cuts-independent") {
    auto inst = testutil::random_general_instance(6, 2, 77);
    RelaxOptions narrow;
    narrow.max_cuts_per_round = 1;
    auto a = solve_relaxation(inst, NormSpec::linf(), narrow);
    auto b = solve_relaxation(inst, NormSpec::linf());
    CHECK(a.lower_bound == doctest::Approx(b.lower_bound).epsilon(1e-6));
    for (size_t i = 1; i < a.log.rowgen_values.size(); ++i)
        CHECK(a.log.rowgen_values[i] >= a.log.rowgen_values[i - 1] - 1e-9);
    CHECK(a.log.rowgen_rounds >= b.log.rowgen_rounds);
}

TEST_CASE("frank-wolfe traces are nonincreasing under exact line search") {
    auto inst = testutil::random_probability_instance(5, 2, 31);
    auto sol = solve_relaxation(inst, NormSpec::lp(2));
    CHECK(sol.log.converged);
    REQUIRE(!sol.log.fw_traces.empty());
    for (const auto& trace : sol.log.fw_traces)
        for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);
}

TEST_CASE("frank-wolfe p=2 value matches the projected-gradient reference") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const Index n = 4 + static_cast<Index>(seed);
        auto inst = testutil::random_probability_instance(n, 2, 400 + seed);
        auto sol = solve_relaxation(inst, NormSpec::lp(2));
        const LayerCosts lc = layer_costs(inst);
        const double f_solver = (lc.a * sol.metric.to_pair_vector() + lc.b).squaredNorm();
        const double f_ref = testutil::projected_gradient_reference_p2(lc, n);
        CHECK(f_solver == doctest::Approx(f_ref).epsilon(1e-4));
        CHECK(sol.lower_bound <= brute_force(inst, NormSpec::lp(2)).opt_value + 1e-6);
    }
}

TEST_CASE("degenerate all-zero layers cost nothing") {
    MultilayerInstance inst(4, 2, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);  // layer 1 left empty
    auto sol = solve_relaxation(inst, NormSpec::linf());
    CHECK(sol.per_layer_cost[1] == doctest::Approx(0.0));
    CHECK(sol.lower_bound == doctest::Approx(0.0));
}

TEST_CASE("single-element instances are trivially solved") {
    MultilayerInstance inst(1, 2, Mode::general);
    auto sol = solve_relaxation(inst, NormSpec::lp(2));
    CHECK(sol.lower_bound == 0.0);
    CHECK(sol.metric.n() == 1);
}

TEST_CASE("the final LP can be dumped in text interchange format") {
    MultilayerInstance inst(3, 1, Mode::general);
    inst.set_weights(0, 0, 1, 1.0, 0.0);
    std::ostringstream dump;
    RelaxOptions opt;
    opt.lp_dump = &dump;
    solve_relaxation(inst, NormSpec::linf(), opt);
    CHECK(dump.str().find("Minimize") == 0);
    CHECK(dump.str().find("Bounds") != std::string::npos);
}

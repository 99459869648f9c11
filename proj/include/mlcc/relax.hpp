#pragma once

#include <mlcc/deadline.hpp>
#include <mlcc/instance.hpp>
#include <mlcc/lp.hpp>
#include <mlcc/types.hpp>

#include <iosfwd>
#include <vector>

namespace mlcc {

/// Symmetric distances in [0,1] with zero diagonal; triangle inequalities
/// hold up to solver tolerance.
struct PseudoMetric {
    Matrix x;

    Index n() const { return x.rows(); }
    double operator()(Index i, Index j) const { return x(i, j); }

    static PseudoMetric from_pair_vector(const Vector& pairs, Index n);
    Vector to_pair_vector() const;

    /// Largest x(i,k) - x(i,j) - x(j,k) over all triples (full Theta(n^3) scan).
    double max_triangle_violation() const;
    double max_box_violation() const;
};

/// Violated row x(i,k) <= x(i,j) + x(j,k); j is the middle element.
struct TriangleCut {
    Index i, j, k;
    double violation;
};

std::vector<TriangleCut> separate_triangles(const Vector& pairs, Index n, double eps,
                                            Index max_cuts);

/// Per-layer fractional costs as linear forms g_ell(x) = a_ell . x + b_ell
/// over unordered-pair variables; defaults (mode) are folded in.
struct LayerCosts {
    Matrix a;  // L x num_pairs
    Vector b;  // length L

    Index num_layers() const { return a.rows(); }
    double cost(Index ell, const Vector& x) const { return a.row(ell).dot(x) + b[ell]; }
    Vector costs(const Vector& x) const { return a * x + b; }
};

LayerCosts layer_costs(const MultilayerInstance& instance);

struct RelaxOptions {
    double triangle_eps = 1e-7;
    Index max_cuts_per_round = 5000;
    int max_rowgen_rounds = 200;
    long max_fw_iterations = 5000;
    double fw_gap_tol = 1e-5;       // relative: gap <= tol * (1 + F)
    double line_search_tol = 1e-9;  // bisection width on the step
    double lp_tol = 1e-9;
    Deadline deadline;
    std::ostream* lp_dump = nullptr;  // final LP, CPLEX LP text format
};

struct SolverLog {
    long lp_iterations = 0;
    long fw_iterations = 0;
    int rowgen_rounds = 0;
    Index cuts_added = 0;
    double triangle_residual = 0.0;
    double fw_gap = 0.0;  // residual gap in the power domain
    bool converged = true;
    std::vector<double> rowgen_values;           // LP value per round, p in {1,inf}
    std::vector<std::vector<double>> fw_traces;  // F per iteration, one trace per round
};

struct RelaxationSolution {
    PseudoMetric metric;
    double lower_bound = 0.0;
    Vector per_layer_cost;
    SolverLog log;
};

/// Solves (CV)/(LP) — or their -Pr forms, selected by the instance mode —
/// over the metric polytope with lazy triangle-row generation. p = inf and
/// p = 1 reduce to LPs; 1 < p < inf runs Frank-Wolfe in the power domain
/// F(x) = sum_ell g_ell(x)^p with solve_lp as the linear-minimization oracle.
RelaxationSolution solve_relaxation(const MultilayerInstance& instance, const NormSpec& norm,
                                    const RelaxOptions& options = {});

}  // namespace mlcc

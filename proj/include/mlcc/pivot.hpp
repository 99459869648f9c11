#pragma once

#include <mlcc/instance.hpp>
#include <mlcc/region_growing.hpp>
#include <mlcc/relax.hpp>

#include <cstdint>
#include <string>

namespace mlcc {

/// Named strategies for solving one probability-constraint layer; the alpha
/// column is the approximation ratio supplied to the (alpha+2) analysis.
enum class SingleLayerSolver { kwik, lp_kwik, exact, region_grow_single };

std::string to_string(SingleLayerSolver solver);
SingleLayerSolver single_layer_solver_from_string(const std::string& s);
double solver_alpha(SingleLayerSolver solver);  // {exact:1, lp_kwik:2.5, kwik:5}

/// Random-pivot combinatorial clustering of one layer: the cluster is the
/// pivot plus every active element with w+ >= 1/2 toward it.
Clustering kwik_cluster(const MultilayerInstance& instance, Index layer, std::uint64_t seed);

/// Random-pivot LP rounding of one layer: each active element joins the
/// pivot's cluster independently with probability 1 - x*.
Clustering lp_kwik_cluster(const MultilayerInstance& instance, const RelaxationSolution& solution,
                           std::uint64_t seed);

/// Extracts one layer as a standalone single-layer instance (same mode).
MultilayerInstance extract_layer(const MultilayerInstance& instance, Index layer);

struct PickBestOptions {
    Index exact_n_cap = 12;
    double region_grow_c = 3.0;
    RelaxOptions relax;
};

/// Runs the sub-solver on every layer and returns the candidate with the
/// smallest multilayer objective, ties broken by the lowest layer index.
Clustering pick_best(const MultilayerInstance& instance, const NormSpec& norm,
                     SingleLayerSolver sub_solver, std::uint64_t seed,
                     const PickBestOptions& options = {});

/// Threshold rounding of the (CV-Pr)/(LP-Pr) pseudometric: the pivot's closed
/// 1/2-ball joins iff its average pivot distance is below 1/4. Certified per
/// run: every layer's disagreement is at most 4x its fractional cost.
Clustering threshold_round(const MultilayerInstance& instance,
                           const RelaxationSolution& solution,
                           PivotRule pivot_rule = PivotRule::lowest_id);

}  // namespace mlcc

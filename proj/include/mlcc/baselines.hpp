#pragma once

#include <mlcc/instance.hpp>
#include <mlcc/pivot.hpp>
#include <mlcc/region_growing.hpp>

#include <cstdint>

namespace mlcc {

struct BaselineOptions {
    double region_grow_c = 3.0;
    RelaxOptions relax;
};

/// Solves MinDisagree per layer with the single-layer region-growing solver
/// and returns the candidate with the smallest multilayer objective.
Clustering pick_a_best(const MultilayerInstance& instance, const NormSpec& norm,
                       const BaselineOptions& options = {});

/// Sums the weights across layers, canonicalizes, and solves the resulting
/// single-layer instance; evaluated by callers on the original objective.
Clustering aggregate(const MultilayerInstance& instance, const NormSpec& norm,
                     const BaselineOptions& options = {});

enum class AggregatePrVariant { lp_kwik, kwik };

/// Averages the layers (probability constraint preserved) and runs the chosen
/// single-layer pivot algorithm.
Clustering aggregate_pr(const MultilayerInstance& instance, const NormSpec& norm,
                        AggregatePrVariant variant, std::uint64_t seed,
                        const BaselineOptions& options = {});

/// The layer-averaged single-layer instance used by aggregate_pr.
MultilayerInstance average_layers(const MultilayerInstance& instance);

/// The layer-summed single-layer instance used by aggregate (not canonical).
MultilayerInstance sum_layers(const MultilayerInstance& instance);

}  // namespace mlcc

#pragma once

#include <mlcc/deadline.hpp>
#include <mlcc/instance.hpp>

#include <cstdint>
#include <functional>
#include <vector>

namespace mlcc {

struct ExactResult {
    double opt_value = 0.0;
    std::vector<Clustering> opt_clusterings;  // all argmin partitions, canonical order
    std::uint64_t partitions_visited = 0;
};

/// Visits every partition of {0..n-1} once, encoded as a restricted growth
/// string, in lexicographic order.
void for_each_partition(Index n, const std::function<void(const std::vector<int>&)>& visit,
                        const Deadline& deadline = {});

/// Exhaustive optimum of the multilayer objective. Bell(12) is about 4.2M
/// partitions; larger n is rejected.
ExactResult brute_force(const MultilayerInstance& instance, const NormSpec& norm,
                        Index n_cap = 12, const Deadline& deadline = {});

/// Exhaustive minimizer of a single layer's disagreement.
ExactResult brute_force_layer(const MultilayerInstance& instance, Index layer,
                              Index n_cap = 12, const Deadline& deadline = {});

}  // namespace mlcc

#pragma once

#include <mlcc/instance.hpp>
#include <mlcc/relax.hpp>

#include <vector>

namespace mlcc {

enum class PivotRule { lowest_id, highest_id };

/// Per-pivot radius search state: distance breakpoints within (0, 1/c] plus
/// the sentinel 1/c, and the global per-layer fractional '+' masses.
struct BallState {
    std::vector<int> active;
    int pivot = 0;
    std::vector<double> breakpoints;
    Vector layer_plus_mass;  // F_ell, computed once over the full V
};

/// F_ell = sum over '+' pairs of w * x, per layer, over the full element set.
Vector layer_plus_mass(const MultilayerInstance& instance, const PseudoMetric& metric);

/// Open ball {j in active : x(pivot, j) < radius}; contains the pivot for r > 0.
std::vector<int> ball(const PseudoMetric& metric, const std::vector<int>& active, int pivot,
                      double radius);

/// Total '+' weight of layer `ell` crossing between `members` and the rest of
/// `active`. `members` must be a subset of `active`.
double cut_value(const MultilayerInstance& instance, const std::vector<int>& active, Index ell,
                 const std::vector<int>& members);

/// Ball volume on layer `ell`: seed mass F/n plus inside '+' mass weighted by
/// x plus boundary '+' mass weighted by (r - x(pivot, j)).
double volume(const MultilayerInstance& instance, const PseudoMetric& metric,
              const std::vector<int>& active, Index ell, int pivot, double radius,
              const std::vector<int>& members, double plus_mass);

BallState make_ball_state(const MultilayerInstance& instance, const PseudoMetric& metric,
                          const std::vector<int>& active, int pivot, double c,
                          const Vector& plus_mass);

struct RadiusChoice {
    double radius = 0.0;
    double ratio = 0.0;  // max over layers with F != 0 of cut/vol at the choice
};

/// Minimizes max_{ell: F_ell != 0} cut/vol over the distance breakpoints in
/// (0, 1/c]; returns 1/c when every layer mass is zero. The returned ratio is
/// certified against the c*L*ln(n+1) bound.
RadiusChoice choose_radius(const MultilayerInstance& instance, const PseudoMetric& metric,
                           const std::vector<int>& active, int pivot, double c,
                           const Vector& plus_mass);

struct RegionGrowTrace {
    Clustering clustering;
    std::vector<int> pivots;
    std::vector<double> radii;
    std::vector<double> ratios;
};

/// Iterative ball extraction from the pseudometric; certified per run against
/// the per-layer cut/volume bounds and the end-to-end approximation factor
/// max{2cL ln(n+1), c/(c-2)}.
RegionGrowTrace region_grow_detailed(const MultilayerInstance& instance,
                                     const RelaxationSolution& solution, double c,
                                     PivotRule pivot_rule = PivotRule::lowest_id);

Clustering region_grow(const MultilayerInstance& instance, const RelaxationSolution& solution,
                       double c = 3.0, PivotRule pivot_rule = PivotRule::lowest_id);

}  // namespace mlcc

#include <mlcc/pivot.hpp>

#include <mlcc/exact.hpp>
#include <mlcc/rng.hpp>

#include <algorithm>
#include <cmath>

namespace mlcc {

namespace {

constexpr double kFeasTol = 1e-6;

void require_probability_mode(const MultilayerInstance& instance, const char* who) {
    if (instance.mode() == Mode::general)
        throw std::invalid_argument(std::string(who) + ": requires a probability-mode instance");
}

int take_random_pivot(std::vector<int>& active, rng::Engine& gen) {
    const size_t at = static_cast<size_t>(rng::uniform_index(gen, active.size()));
    const int pivot = active[at];
    return pivot;
}

std::vector<int> remove_members(const std::vector<int>& active, const std::vector<char>& mask) {
    std::vector<int> remaining;
    for (int v : active)
        if (!mask[static_cast<size_t>(v)]) remaining.push_back(v);
    return remaining;
}

}  // namespace

std::string to_string(SingleLayerSolver solver) {
    switch (solver) {
        case SingleLayerSolver::kwik: return "kwik";
        case SingleLayerSolver::lp_kwik: return "lpkwik";
        case SingleLayerSolver::exact: return "exact";
        case SingleLayerSolver::region_grow_single: return "rg";
    }
    throw std::logic_error("unknown single-layer solver");
}

SingleLayerSolver single_layer_solver_from_string(const std::string& s) {
    if (s == "kwik") return SingleLayerSolver::kwik;
    if (s == "lpkwik" || s == "lp_kwik") return SingleLayerSolver::lp_kwik;
    if (s == "exact") return SingleLayerSolver::exact;
    if (s == "rg" || s == "region_grow") return SingleLayerSolver::region_grow_single;
    throw std::invalid_argument("unknown single-layer solver: " + s);
}

double solver_alpha(SingleLayerSolver solver) {
    switch (solver) {
        case SingleLayerSolver::exact: return 1.0;
        case SingleLayerSolver::lp_kwik: return 2.5;
        case SingleLayerSolver::kwik: return 5.0;
        case SingleLayerSolver::region_grow_single:
            return std::numeric_limits<double>::quiet_NaN();  // O(log n), not a constant
    }
    throw std::logic_error("unknown single-layer solver");
}

Clustering kwik_cluster(const MultilayerInstance& instance, Index layer, std::uint64_t seed) {
    require_probability_mode(instance, "kwik_cluster");
    if (layer < 0 || layer >= instance.num_layers())
        throw std::out_of_range("kwik_cluster: layer index out of range");
    const Index n = instance.n();
    rng::Engine gen(seed);
    std::vector<int> active(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) active[static_cast<size_t>(i)] = static_cast<int>(i);
    std::vector<int> assignment(static_cast<size_t>(n), -1);
    int next = 0;
    while (!active.empty()) {
        const int pivot = take_random_pivot(active, gen);
        std::vector<char> mask(static_cast<size_t>(n), 0);
        mask[static_cast<size_t>(pivot)] = 1;
        for (int j : active) {
            if (j == pivot) continue;
            if (instance.weights(layer, pivot, j).plus >= 0.5) mask[static_cast<size_t>(j)] = 1;
        }
        for (int v : active)
            if (mask[static_cast<size_t>(v)]) assignment[static_cast<size_t>(v)] = next;
        ++next;
        active = remove_members(active, mask);
    }
    return Clustering(assignment);
}

Clustering lp_kwik_cluster(const MultilayerInstance& instance, const RelaxationSolution& solution,
                           std::uint64_t seed) {
    require_probability_mode(instance, "lp_kwik_cluster");
    const Index n = instance.n();
    const PseudoMetric& metric = solution.metric;
    if (metric.n() != n) throw std::invalid_argument("lp_kwik_cluster: metric size mismatch");
    rng::Engine gen(seed);
    std::vector<int> active(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) active[static_cast<size_t>(i)] = static_cast<int>(i);
    std::vector<int> assignment(static_cast<size_t>(n), -1);
    int next = 0;
    while (!active.empty()) {
        const int pivot = take_random_pivot(active, gen);
        std::vector<char> mask(static_cast<size_t>(n), 0);
        mask[static_cast<size_t>(pivot)] = 1;
        for (int j : active) {  // increasing id order fixes the draw sequence
            if (j == pivot) continue;
            if (rng::uniform_real01(gen) < 1.0 - metric(pivot, j))
                mask[static_cast<size_t>(j)] = 1;
        }
        for (int v : active)
            if (mask[static_cast<size_t>(v)]) assignment[static_cast<size_t>(v)] = next;
        ++next;
        active = remove_members(active, mask);
    }
    return Clustering(assignment);
}

MultilayerInstance extract_layer(const MultilayerInstance& instance, Index layer) {
    MultilayerInstance out(instance.n(), 1, instance.mode());
    for (const auto& [key, w] : instance.stored(layer))
        out.set_weights(0, key.first, key.second, w.plus, w.minus);
    return out;
}

Clustering pick_best(const MultilayerInstance& instance, const NormSpec& norm,
                     SingleLayerSolver sub_solver, std::uint64_t seed,
                     const PickBestOptions& options) {
    require_probability_mode(instance, "pick_best");
    const Index L = instance.num_layers();
    Clustering best = Clustering::singletons(instance.n());
    double best_value = std::numeric_limits<double>::infinity();
    for (Index ell = 0; ell < L; ++ell) {
        const MultilayerInstance layer = extract_layer(instance, ell);
        Clustering candidate = [&]() {
            switch (sub_solver) {
                case SingleLayerSolver::kwik:
                    return kwik_cluster(layer, 0, seed + static_cast<std::uint64_t>(ell));
                case SingleLayerSolver::lp_kwik: {
                    auto relax = solve_relaxation(layer, NormSpec::lp(1), options.relax);
                    return lp_kwik_cluster(layer, relax,
                                           seed + static_cast<std::uint64_t>(ell));
                }
                case SingleLayerSolver::exact:
                    return brute_force(layer, NormSpec::lp(1), options.exact_n_cap,
                                       options.relax.deadline)
                        .opt_clusterings.front();
                case SingleLayerSolver::region_grow_single: {
                    // Recast the probability layer in canonical general form:
                    // materialize the (0.5,0.5) defaults, shift off min(w+,w-).
                    MultilayerInstance general(layer.n(), 1, Mode::general);
                    for (Index u = 0; u < layer.n(); ++u)
                        for (Index v = u + 1; v < layer.n(); ++v) {
                            const PairWeights w = layer.weights(0, u, v);
                            const double shift = std::min(w.plus, w.minus);
                            if (w.plus - shift != 0.0 || w.minus - shift != 0.0)
                                general.set_weights(0, u, v, w.plus - shift, w.minus - shift);
                        }
                    auto relax = solve_relaxation(general, NormSpec::lp(1), options.relax);
                    return region_grow(general, relax, options.region_grow_c);
                }
            }
            throw std::logic_error("unknown single-layer solver");
        }();
        const double value = objective(instance, candidate, norm);
        if (value < best_value) {  // strict: ties keep the lowest layer index
            best_value = value;
            best = std::move(candidate);
        }
    }
    return best;
}

Clustering threshold_round(const MultilayerInstance& instance,
                           const RelaxationSolution& solution, PivotRule pivot_rule) {
    require_probability_mode(instance, "threshold_round");
    const Index n = instance.n();
    const PseudoMetric& metric = solution.metric;
    if (metric.n() != n) throw std::invalid_argument("threshold_round: metric size mismatch");
    if (metric.max_triangle_violation() > kFeasTol || metric.max_box_violation() > kFeasTol)
        throw std::invalid_argument("threshold_round: infeasible metric");

    std::vector<int> active(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) active[static_cast<size_t>(i)] = static_cast<int>(i);
    std::vector<int> assignment(static_cast<size_t>(n), -1);
    int next = 0;
    while (!active.empty()) {
        const int pivot = pivot_rule == PivotRule::lowest_id ? active.front() : active.back();
        std::vector<int> close;  // C: the closed 1/2-ball minus the pivot
        double distance_sum = 0.0;
        for (int j : active) {
            if (j == pivot) continue;
            if (metric(pivot, j) <= 0.5) {
                close.push_back(j);
                distance_sum += metric(pivot, j);
            }
        }
        std::vector<char> mask(static_cast<size_t>(n), 0);
        mask[static_cast<size_t>(pivot)] = 1;
        // Empty C counts as average >= 1/4: the pivot stays a singleton.
        if (!close.empty() && distance_sum / static_cast<double>(close.size()) < 0.25)
            for (int j : close) mask[static_cast<size_t>(j)] = 1;
        for (int v : active)
            if (mask[static_cast<size_t>(v)]) assignment[static_cast<size_t>(v)] = next;
        ++next;
        active = remove_members(active, mask);
    }
    Clustering clustering(assignment);

    // Per-run certificate: Disagree_ell <= 4 * fractional cost of layer ell.
    const LayerCosts lc = layer_costs(instance);
    const Vector fractional = lc.costs(metric.to_pair_vector()).cwiseMax(0.0);
    for (Index ell = 0; ell < instance.num_layers(); ++ell) {
        const double lhs = disagreement(instance, clustering, ell);
        const double rhs = 4.0 * fractional[ell];
        if (lhs > rhs + 1e-6 * (1.0 + rhs))
            throw std::logic_error("threshold_round: 4x per-layer certificate violated");
    }
    return clustering;
}

}  // namespace mlcc

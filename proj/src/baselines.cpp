#include <mlcc/baselines.hpp>

#include <limits>
#include <set>

namespace mlcc {

namespace {

std::set<std::pair<Index, Index>> stored_pair_union(const MultilayerInstance& instance) {
    std::set<std::pair<Index, Index>> keys;
    for (Index ell = 0; ell < instance.num_layers(); ++ell)
        for (const auto& [key, w] : instance.stored(ell)) keys.insert(key);
    return keys;
}

}  // namespace

MultilayerInstance sum_layers(const MultilayerInstance& instance) {
    if (instance.mode() != Mode::general)
        throw std::invalid_argument("sum_layers: requires general mode");
    MultilayerInstance out(instance.n(), 1, Mode::general);
    for (const auto& key : stored_pair_union(instance)) {
        double plus = 0.0, minus = 0.0;
        for (Index ell = 0; ell < instance.num_layers(); ++ell) {
            const PairWeights w = instance.weights(ell, key.first, key.second);
            plus += w.plus;
            minus += w.minus;
        }
        if (plus != 0.0 || minus != 0.0) out.set_weights(0, key.first, key.second, plus, minus);
    }
    return out;
}

MultilayerInstance average_layers(const MultilayerInstance& instance) {
    if (instance.mode() == Mode::general)
        throw std::invalid_argument("average_layers: requires a probability mode");
    MultilayerInstance out(instance.n(), 1, instance.mode());
    const double L = static_cast<double>(instance.num_layers());
    for (const auto& key : stored_pair_union(instance)) {
        double plus = 0.0, minus = 0.0;
        for (Index ell = 0; ell < instance.num_layers(); ++ell) {
            const PairWeights w = instance.weights(ell, key.first, key.second);
            plus += w.plus;
            minus += w.minus;
        }
        out.set_weights(0, key.first, key.second, plus / L, minus / L);
    }
    return out;
}

Clustering pick_a_best(const MultilayerInstance& instance, const NormSpec& norm,
                       const BaselineOptions& options) {
    if (instance.mode() != Mode::general)
        throw std::invalid_argument("pick_a_best: requires general mode");
    Clustering best = Clustering::singletons(instance.n());
    double best_value = std::numeric_limits<double>::infinity();
    for (Index ell = 0; ell < instance.num_layers(); ++ell) {
        const MultilayerInstance layer = extract_layer(instance, ell);
        auto relax = solve_relaxation(layer, NormSpec::lp(1), options.relax);
        Clustering candidate = region_grow(layer, relax, options.region_grow_c);
        const double value = objective(instance, candidate, norm);
        if (value < best_value) {
            best_value = value;
            best = std::move(candidate);
        }
    }
    return best;
}

Clustering aggregate(const MultilayerInstance& instance, const NormSpec& norm,
                     const BaselineOptions& options) {
    (void)norm;  // the aggregated layer is solved for its own disagreement
    auto [canon, offsets] = canonicalize_general(sum_layers(instance));
    (void)offsets;
    auto relax = solve_relaxation(canon, NormSpec::lp(1), options.relax);
    return region_grow(canon, relax, options.region_grow_c);
}

Clustering aggregate_pr(const MultilayerInstance& instance, const NormSpec& norm,
                        AggregatePrVariant variant, std::uint64_t seed,
                        const BaselineOptions& options) {
    (void)norm;
    const MultilayerInstance averaged = average_layers(instance);
    if (variant == AggregatePrVariant::kwik) return kwik_cluster(averaged, 0, seed);
    auto relax = solve_relaxation(averaged, NormSpec::lp(1), options.relax);
    return lp_kwik_cluster(averaged, relax, seed);
}

}  // namespace mlcc

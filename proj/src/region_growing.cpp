#include <mlcc/region_growing.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mlcc {

namespace {

constexpr double kFeasTol = 1e-6;

std::vector<char> member_mask(Index n, const std::vector<int>& members) {
    std::vector<char> mask(static_cast<size_t>(n), 0);
    for (int v : members) mask[static_cast<size_t>(v)] = 1;
    return mask;
}

}  // namespace

Vector layer_plus_mass(const MultilayerInstance& instance, const PseudoMetric& metric) {
    const Index n = instance.n();
    Vector mass = Vector::Zero(instance.num_layers());
    for (Index ell = 0; ell < instance.num_layers(); ++ell)
        for (Index u = 0; u < n; ++u)
            for (Index v = u + 1; v < n; ++v)
                mass[ell] += instance.weights(ell, u, v).plus * metric(u, v);
    return mass;
}

std::vector<int> ball(const PseudoMetric& metric, const std::vector<int>& active, int pivot,
                      double radius) {
    std::vector<int> members;
    for (int j : active)
        if (metric(pivot, j) < radius) members.push_back(j);
    return members;
}

double cut_value(const MultilayerInstance& instance, const std::vector<int>& active, Index ell,
                 const std::vector<int>& members) {
    const auto mask = member_mask(instance.n(), members);
    double total = 0.0;
    for (size_t a = 0; a < active.size(); ++a) {
        for (size_t b = a + 1; b < active.size(); ++b) {
            const int u = active[a];
            const int v = active[b];
            if (mask[static_cast<size_t>(u)] == mask[static_cast<size_t>(v)]) continue;
            total += instance.weights(ell, u, v).plus;
        }
    }
    return total;
}

double volume(const MultilayerInstance& instance, const PseudoMetric& metric,
              const std::vector<int>& active, Index ell, int pivot, double radius,
              const std::vector<int>& members, double plus_mass) {
    const auto mask = member_mask(instance.n(), members);
    double total = plus_mass / static_cast<double>(instance.n());
    for (size_t a = 0; a < active.size(); ++a) {
        for (size_t b = a + 1; b < active.size(); ++b) {
            const int u = active[a];
            const int v = active[b];
            const bool in_u = mask[static_cast<size_t>(u)];
            const bool in_v = mask[static_cast<size_t>(v)];
            if (!in_u && !in_v) continue;
            const double w = instance.weights(ell, u, v).plus;
            if (w == 0.0) continue;
            if (in_u && in_v) {
                total += w * metric(u, v);
            } else {
                const int inside = in_u ? u : v;
                total += w * (radius - metric(pivot, inside));
            }
        }
    }
    return total;
}

BallState make_ball_state(const MultilayerInstance& instance, const PseudoMetric& metric,
                          const std::vector<int>& active, int pivot, double c,
                          const Vector& plus_mass) {
    if (!(c > 2.0)) throw std::invalid_argument("region growing requires c > 2");
    BallState state;
    state.active = active;
    state.pivot = pivot;
    state.layer_plus_mass = plus_mass;
    (void)instance;
    std::set<double> distinct;
    const double limit = 1.0 / c;
    for (int j : active) {
        const double d = metric(pivot, j);
        if (d > 0.0 && d < limit) distinct.insert(d);
    }
    state.breakpoints.assign(distinct.begin(), distinct.end());
    state.breakpoints.push_back(limit);
    return state;
}

RadiusChoice choose_radius(const MultilayerInstance& instance, const PseudoMetric& metric,
                           const std::vector<int>& active, int pivot, double c,
                           const Vector& plus_mass) {
    const BallState state = make_ball_state(instance, metric, active, pivot, c, plus_mass);
    const Index L = instance.num_layers();

    bool any_mass = false;
    for (Index ell = 0; ell < L; ++ell) any_mass = any_mass || plus_mass[ell] != 0.0;
    if (!any_mass) return {1.0 / c, 0.0};

    RadiusChoice best;
    bool first = true;
    for (double r : state.breakpoints) {
        const auto members = ball(metric, active, pivot, r);
        double ratio = 0.0;
        for (Index ell = 0; ell < L; ++ell) {
            if (plus_mass[ell] == 0.0) continue;
            const double vol = volume(instance, metric, active, ell, pivot, r, members,
                                      plus_mass[ell]);
            if (!(vol > 0.0))
                throw std::logic_error("choose_radius: nonpositive volume with F != 0");
            ratio = std::max(ratio, cut_value(instance, active, ell, members) / vol);
        }
        if (first || ratio < best.ratio) {
            first = false;
            best = {r, ratio};
        }
    }

    const double bound =
        c * static_cast<double>(L) * std::log(static_cast<double>(instance.n()) + 1.0);
    if (best.ratio > bound * (1.0 + 1e-9) + 1e-9) {
        std::ostringstream os;
        os << "choose_radius: ratio " << best.ratio << " exceeds the c*L*ln(n+1) bound "
           << bound;
        throw std::logic_error(os.str());
    }
    return best;
}

namespace {

void certify_region_growth(const MultilayerInstance& instance, const PseudoMetric& metric,
                           const Clustering& clustering, double c,
                           const Vector& plus_mass) {
    const Index n = instance.n();
    const Index L = instance.num_layers();
    const double factor_plus =
        2.0 * c * static_cast<double>(L) * std::log(static_cast<double>(n) + 1.0);
    const double factor_minus = c / (c - 2.0);
    const double residual = std::max(metric.max_triangle_violation(), 0.0);

    for (Index ell = 0; ell < L; ++ell) {
        double separated_plus = 0.0;
        double together_minus = 0.0;
        double minus_frac = 0.0;
        double total_plus = 0.0;
        double total_minus = 0.0;
        for (Index u = 0; u < n; ++u) {
            for (Index v = u + 1; v < n; ++v) {
                const PairWeights w = instance.weights(ell, u, v);
                total_plus += w.plus;
                total_minus += w.minus;
                minus_frac += w.minus * (1.0 - metric(u, v));
                if (clustering.same_cluster(u, v))
                    together_minus += w.minus;
                else
                    separated_plus += w.plus;
            }
        }
        if (plus_mass[ell] == 0.0) {
            // A zero-mass layer has x = 0 on all its '+' pairs; none separate.
            if (separated_plus > 1e-6 * (1.0 + total_plus))
                throw std::logic_error("region_grow: separated '+' weight on a zero-mass layer");
        } else {
            const double rhs = factor_plus * plus_mass[ell];
            const double slack = 1e-6 * (1.0 + rhs) + factor_plus * residual * total_plus;
            if (separated_plus > rhs + slack)
                throw std::logic_error("region_grow: per-layer '+' cut bound violated");
        }
        // The metric residual enters the '-' analysis through x(j,k) < 2/c.
        const double rhs_minus = factor_minus * minus_frac;
        const double slack_minus =
            1e-6 * (1.0 + rhs_minus) + 2.0 * factor_minus * residual * total_minus;
        if (together_minus > rhs_minus + slack_minus)
            throw std::logic_error("region_grow: per-layer '-' bound violated");
    }
}

}  // namespace

RegionGrowTrace region_grow_detailed(const MultilayerInstance& instance,
                                     const RelaxationSolution& solution, double c,
                                     PivotRule pivot_rule) {
    if (!(c > 2.0)) throw std::invalid_argument("region_grow: requires c > 2");
    const PseudoMetric& metric = solution.metric;
    if (metric.n() != instance.n())
        throw std::invalid_argument("region_grow: metric size mismatch");
    if (metric.max_triangle_violation() > kFeasTol || metric.max_box_violation() > kFeasTol)
        throw std::invalid_argument("region_grow: infeasible metric");

    const Index n = instance.n();
    const Vector plus_mass = layer_plus_mass(instance, metric);

    std::vector<int> active(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) active[static_cast<size_t>(i)] = static_cast<int>(i);

    std::vector<int> assignment(static_cast<size_t>(n), -1);
    RegionGrowTrace trace{Clustering::singletons(n), {}, {}, {}};
    int next_cluster = 0;
    while (!active.empty()) {
        const int pivot = pivot_rule == PivotRule::lowest_id ? active.front() : active.back();
        const RadiusChoice choice =
            choose_radius(instance, metric, active, pivot, c, plus_mass);
        const auto members = ball(metric, active, pivot, choice.radius);
        if (members.empty()) throw std::logic_error("region_grow: empty ball");
        for (int v : members) assignment[static_cast<size_t>(v)] = next_cluster;
        ++next_cluster;
        std::vector<int> remaining;
        const auto mask = member_mask(n, members);
        for (int v : active)
            if (!mask[static_cast<size_t>(v)]) remaining.push_back(v);
        active = std::move(remaining);
        trace.pivots.push_back(pivot);
        trace.radii.push_back(choice.radius);
        trace.ratios.push_back(choice.ratio);
    }

    trace.clustering = Clustering(assignment);
    certify_region_growth(instance, metric, trace.clustering, c, plus_mass);
    return trace;
}

Clustering region_grow(const MultilayerInstance& instance, const RelaxationSolution& solution,
                       double c, PivotRule pivot_rule) {
    return region_grow_detailed(instance, solution, c, pivot_rule).clustering;
}

}  // namespace mlcc

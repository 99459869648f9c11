#include <mlcc/relax.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace mlcc {

PseudoMetric PseudoMetric::from_pair_vector(const Vector& pairs, Index n) {
    PairIndexer idx(n);
    if (pairs.size() != idx.size())
        throw std::invalid_argument("pseudometric: pair vector has wrong length");
    PseudoMetric metric;
    metric.x = Matrix::Zero(n, n);
    for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < n; ++v) metric.x(u, v) = metric.x(v, u) = pairs[idx(u, v)];
    return metric;
}

Vector PseudoMetric::to_pair_vector() const {
    const Index nn = n();
    PairIndexer idx(nn);
    Vector pairs(idx.size());
    for (Index u = 0; u < nn; ++u)
        for (Index v = u + 1; v < nn; ++v) pairs[idx(u, v)] = x(u, v);
    return pairs;
}

double PseudoMetric::max_triangle_violation() const {
    const Index nn = n();
    double worst = 0.0;
    for (Index i = 0; i < nn; ++i)
        for (Index j = 0; j < nn; ++j) {
            if (j == i) continue;
            for (Index k = i + 1; k < nn; ++k) {
                if (k == j) continue;
                worst = std::max(worst, x(i, k) - x(i, j) - x(j, k));
            }
        }
    return worst;
}

double PseudoMetric::max_box_violation() const {
    const Index nn = n();
    double worst = 0.0;
    for (Index i = 0; i < nn; ++i) {
        worst = std::max(worst, std::abs(x(i, i)));
        for (Index j = 0; j < nn; ++j) {
            worst = std::max(worst, -x(i, j));
            worst = std::max(worst, x(i, j) - 1.0);
            worst = std::max(worst, std::abs(x(i, j) - x(j, i)));
        }
    }
    return worst;
}

std::vector<TriangleCut> separate_triangles(const Vector& pairs, Index n, double eps,
                                            Index max_cuts) {
    PairIndexer idx(n);
    if (pairs.size() != idx.size())
        throw std::invalid_argument("separate_triangles: pair vector has wrong length");
    std::vector<TriangleCut> cuts;
    for (Index a = 0; a < n; ++a) {
        for (Index b = a + 1; b < n; ++b) {
            const double xab = pairs[idx(a, b)];
            for (Index c = b + 1; c < n; ++c) {
                const double xac = pairs[idx(a, c)];
                const double xbc = pairs[idx(b, c)];
                // Each unordered triple yields three rows, one per middle.
                if (xbc - xab - xac > eps) cuts.push_back({b, a, c, xbc - xab - xac});
                if (xac - xab - xbc > eps) cuts.push_back({a, b, c, xac - xab - xbc});
                if (xab - xac - xbc > eps) cuts.push_back({a, c, b, xab - xac - xbc});
            }
        }
    }
    std::stable_sort(cuts.begin(), cuts.end(), [](const TriangleCut& l, const TriangleCut& r) {
        return l.violation > r.violation;
    });
    if (static_cast<Index>(cuts.size()) > max_cuts) cuts.resize(static_cast<size_t>(max_cuts));
    return cuts;
}

LayerCosts layer_costs(const MultilayerInstance& instance) {
    const Index n = instance.n();
    const Index L = instance.num_layers();
    PairIndexer idx(n);
    LayerCosts lc;
    lc.a = Matrix::Zero(L, idx.size());
    lc.b = Vector::Zero(L);
    for (Index ell = 0; ell < L; ++ell) {
        for (Index u = 0; u < n; ++u)
            for (Index v = u + 1; v < n; ++v) {
                const PairWeights w = instance.weights(ell, u, v);
                lc.a(ell, idx(u, v)) = w.plus - w.minus;
                lc.b[ell] += w.minus;
            }
    }
    return lc;
}

namespace {

LinearRow cut_row(const TriangleCut& cut, const PairIndexer& idx) {
    return {{{idx(cut.i, cut.k), 1.0}, {idx(cut.i, cut.j), -1.0}, {idx(cut.j, cut.k), -1.0}},
            RowSense::le,
            0.0};
}

void snap_to_box(Vector& x) {
    for (Index i = 0; i < x.size(); ++i) {
        if (x[i] < 1e-12) x[i] = 0.0;
        else if (x[i] > 1.0 - 1e-12) x[i] = 1.0;
    }
}

struct CutPool {
    std::vector<TriangleCut> cuts;
    std::set<std::tuple<Index, Index, Index>> seen;

    Index add(const std::vector<TriangleCut>& found) {
        Index added = 0;
        for (const auto& c : found) {
            Index lo = std::min(c.i, c.k), hi = std::max(c.i, c.k);
            if (seen.insert({c.j, lo, hi}).second) {
                cuts.push_back(c);
                ++added;
            }
        }
        return added;
    }
};

RelaxationSolution finish(const LayerCosts& lc, const NormSpec& norm, Vector x, Index n,
                          double lower_bound, SolverLog log) {
    snap_to_box(x);
    RelaxationSolution sol;
    sol.metric = PseudoMetric::from_pair_vector(x, n);
    sol.per_layer_cost = lc.costs(x).cwiseMax(0.0);
    sol.lower_bound = std::max(lower_bound, 0.0);
    sol.log = std::move(log);
    (void)norm;
    return sol;
}

/// Row-generation loop for the pure LP cases (p = 1 and p = inf).
RelaxationSolution solve_lp_relaxation(const LayerCosts& lc, const NormSpec& norm, Index n,
                                       const RelaxOptions& opt) {
    const PairIndexer idx(n);
    const Index m = idx.size();
    const Index L = lc.num_layers();
    const bool minimax = norm.is_inf();

    LinearProgramSpec base = LinearProgramSpec::boxed(minimax ? m + 1 : m);
    if (minimax) {
        double t_hi = 1.0;
        for (Index ell = 0; ell < L; ++ell)
            t_hi = std::max(t_hi, lc.b[ell] + lc.a.row(ell).cwiseMax(0.0).sum() + 1.0);
        base.upper[m] = t_hi;
        base.objective[m] = 1.0;
        for (Index ell = 0; ell < L; ++ell) {
            LinearRow row;
            for (Index j = 0; j < m; ++j)
                if (lc.a(ell, j) != 0.0) row.coeffs.push_back({j, lc.a(ell, j)});
            row.coeffs.push_back({m, -1.0});
            row.sense = RowSense::le;
            row.rhs = -lc.b[ell];
            base.rows.push_back(std::move(row));
        }
    } else {
        const Vector c = lc.a.colwise().sum().transpose();
        base.objective.head(m) = c;
    }

    CutPool pool;
    SolverLog log;
    Vector x = Vector::Zero(m);
    double value = 0.0;
    bool clean = false;
    for (int round = 0; round < opt.max_rowgen_rounds; ++round) {
        opt.deadline.check();
        LinearProgramSpec spec = base;
        for (const auto& cut : pool.cuts) spec.rows.push_back(cut_row(cut, idx));
        auto lp = solve_lp(spec, opt.lp_tol, opt.deadline);
        log.lp_iterations += lp.iterations;
        ++log.rowgen_rounds;
        if (lp.status != LpStatus::optimal)
            throw std::runtime_error("solve_relaxation: LP backend failed");
        x = lp.x.head(m);
        value = lp.value;
        log.rowgen_values.push_back(value);
        auto found = separate_triangles(x, n, opt.triangle_eps, opt.max_cuts_per_round);
        if (found.empty()) {
            clean = true;
            log.triangle_residual = 0.0;
            if (opt.lp_dump) write_lp_format(spec, *opt.lp_dump);
            break;
        }
        log.triangle_residual = found.front().violation;
        log.cuts_added += pool.add(found);
    }
    log.converged = clean;

    const double lower_bound = minimax ? value : value + lc.b.sum();
    return finish(lc, norm, std::move(x), n, lower_bound, std::move(log));
}

/// F and its gradient in the power domain.
struct PowerObjective {
    const LayerCosts& lc;
    double p;

    double value(const Vector& x) const {
        const Vector g = lc.costs(x).cwiseMax(0.0);
        double f = 0.0;
        for (Index ell = 0; ell < g.size(); ++ell) f += std::pow(g[ell], p);
        return f;
    }
    Vector gradient(const Vector& x) const {
        const Vector g = lc.costs(x).cwiseMax(0.0);
        Vector grad = Vector::Zero(lc.a.cols());
        for (Index ell = 0; ell < g.size(); ++ell) {
            const double scale = p * std::pow(g[ell], p - 1.0);
            if (scale != 0.0) grad += scale * lc.a.row(ell).transpose();
        }
        return grad;
    }
};

/// Away-step Frank-Wolfe over the cut-pool outer approximation of the metric
/// polytope. Linear convergence on this quadratic-like objective keeps the
/// 5000-iteration budget comfortable.
RelaxationSolution solve_fw_relaxation(const LayerCosts& lc, const NormSpec& norm, Index n,
                                       const RelaxOptions& opt) {
    const PairIndexer idx(n);
    const Index m = idx.size();
    const PowerObjective objective{lc, norm.p()};

    CutPool pool;
    SolverLog log;

    LinearProgramSpec lmo_spec = LinearProgramSpec::boxed(m);
    auto lmo = [&](const Vector& grad) {
        lmo_spec.objective = grad;
        auto lp = solve_lp(lmo_spec, opt.lp_tol, opt.deadline);
        log.lp_iterations += lp.iterations;
        if (lp.status != LpStatus::optimal)
            throw std::runtime_error("solve_relaxation: LMO LP failed");
        return lp.x;
    };

    // Active vertex set with convex weights; x is kept equal to the
    // combination to suppress numeric drift.
    std::vector<Vector> verts;
    std::vector<double> weights;
    auto combination = [&]() {
        Vector x = Vector::Zero(m);
        for (size_t i = 0; i < verts.size(); ++i) x += weights[i] * verts[i];
        return x;
    };
    auto find_vertex = [&](const Vector& v) -> long {
        for (size_t i = 0; i < verts.size(); ++i)
            if ((verts[i] - v).lpNorm<Eigen::Infinity>() <= 1e-12) return static_cast<long>(i);
        return -1;
    };
    auto drop_vertex = [&](size_t at) {
        verts.erase(verts.begin() + static_cast<long>(at));
        weights.erase(weights.begin() + static_cast<long>(at));
    };

    verts.push_back(lmo(objective.gradient(Vector::Zero(m))));
    weights.push_back(1.0);
    Vector x = combination();

    double gap = std::numeric_limits<double>::infinity();
    long total_iters = 0;
    bool converged = false;
    for (int round = 0; round < opt.max_rowgen_rounds; ++round) {
        ++log.rowgen_rounds;
        log.fw_traces.emplace_back();
        auto& trace = log.fw_traces.back();
        bool round_converged = false;
        while (total_iters < opt.max_fw_iterations) {
            opt.deadline.check();
            ++total_iters;
            const double f = objective.value(x);
            trace.push_back(f);
            const Vector grad = objective.gradient(x);
            const Vector s = lmo(grad);
            gap = grad.dot(x - s);
            if (gap <= opt.fw_gap_tol * (1.0 + f)) {
                round_converged = true;
                break;
            }

            // Away vertex: the active vertex the gradient most wants to leave.
            size_t away = 0;
            double away_score = -std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < verts.size(); ++i) {
                const double sc = grad.dot(verts[i]);
                if (sc > away_score) {
                    away_score = sc;
                    away = i;
                }
            }

            Vector dir;
            double gamma_max;
            bool away_step = false;
            if (gap >= away_score - grad.dot(x) || weights[away] >= 1.0 - 1e-14) {
                dir = s - x;
                gamma_max = 1.0;
            } else {
                away_step = true;
                dir = x - verts[away];
                gamma_max = weights[away] / (1.0 - weights[away]);
            }

            // Exact line search: bisection on the convex derivative.
            auto dphi = [&](double gamma) { return objective.gradient(x + gamma * dir).dot(dir); };
            double gamma = gamma_max;
            if (dphi(gamma_max) > 0.0) {
                double lo = 0.0, hi = gamma_max;
                while (hi - lo > opt.line_search_tol) {
                    const double mid = 0.5 * (lo + hi);
                    (dphi(mid) > 0.0 ? hi : lo) = mid;
                }
                gamma = 0.5 * (lo + hi);
            }
            if (gamma <= 0.0) continue;

            if (away_step) {
                for (double& w : weights) w *= 1.0 + gamma;
                weights[away] -= gamma;
            } else {
                for (double& w : weights) w *= 1.0 - gamma;
                const long at = find_vertex(s);
                if (at >= 0)
                    weights[static_cast<size_t>(at)] += gamma;
                else {
                    verts.push_back(s);
                    weights.push_back(gamma);
                }
            }
            for (size_t i = verts.size(); i-- > 0;)
                if (weights[i] <= 1e-14) drop_vertex(i);
            double total = 0.0;
            for (double w : weights) total += w;
            for (double& w : weights) w /= total;
            x = combination();
        }
        log.fw_iterations = total_iters;

        auto found = separate_triangles(x, n, opt.triangle_eps, opt.max_cuts_per_round);
        if (found.empty()) {
            log.triangle_residual = 0.0;
            converged = round_converged;
            break;
        }
        log.triangle_residual = found.front().violation;
        log.cuts_added += pool.add(found);
        if (total_iters >= opt.max_fw_iterations) break;

        // Rebuild the oracle polytope and restart from a feasible vertex.
        lmo_spec = LinearProgramSpec::boxed(m);
        for (const auto& cut : pool.cuts) lmo_spec.rows.push_back(cut_row(cut, idx));
        verts.clear();
        weights.clear();
        verts.push_back(lmo(objective.gradient(x)));
        weights.push_back(1.0);
        x = combination();
    }
    if (opt.lp_dump) write_lp_format(lmo_spec, *opt.lp_dump);

    log.converged = converged;
    log.fw_gap = gap;
    const double f = objective.value(x);
    const double lb_power = std::max(f - gap, 0.0);
    const double lower_bound = std::pow(lb_power, 1.0 / norm.p());
    return finish(lc, norm, std::move(x), n, lower_bound, std::move(log));
}

}  // namespace

RelaxationSolution solve_relaxation(const MultilayerInstance& instance, const NormSpec& norm,
                                    const RelaxOptions& options) {
    const Index n = instance.n();
    const LayerCosts lc = layer_costs(instance);
    if (n == 1) {
        RelaxationSolution sol;
        sol.metric.x = Matrix::Zero(1, 1);
        sol.per_layer_cost = lc.b;
        sol.lower_bound = norm.reduce(lc.b);
        return sol;
    }
    if (norm.is_inf() || norm.p() == 1.0) return solve_lp_relaxation(lc, norm, n, options);
    return solve_fw_relaxation(lc, norm, n, options);
}

}  // namespace mlcc

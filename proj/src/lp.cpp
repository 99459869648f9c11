#include <mlcc/lp.hpp>

#include <mlcc/instance.hpp>  // format_double

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace mlcc {

LinearProgramSpec LinearProgramSpec::boxed(Index num_vars, double lo, double hi) {
    LinearProgramSpec spec;
    spec.num_vars = num_vars;
    spec.objective = Vector::Zero(num_vars);
    spec.lower = Vector::Constant(num_vars, lo);
    spec.upper = Vector::Constant(num_vars, hi);
    return spec;
}

void LinearProgramSpec::validate() const {
    if (num_vars < 1) throw std::invalid_argument("lp: num_vars must be positive");
    if (objective.size() != num_vars || lower.size() != num_vars || upper.size() != num_vars)
        throw std::invalid_argument("lp: vector sizes must match num_vars");
    for (Index j = 0; j < num_vars; ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]))
            throw std::invalid_argument("lp: box bounds must be finite");
        if (lower[j] > upper[j]) throw std::invalid_argument("lp: lower > upper");
        if (!std::isfinite(objective[j]))
            throw std::invalid_argument("lp: objective must be finite");
    }
    for (const auto& row : rows) {
        if (!std::isfinite(row.rhs)) throw std::invalid_argument("lp: rhs must be finite");
        for (const auto& [j, a] : row.coeffs) {
            if (j < 0 || j >= num_vars)
                throw std::invalid_argument("lp: row references variable out of range");
            if (!std::isfinite(a)) throw std::invalid_argument("lp: coefficient must be finite");
        }
    }
}

double lp_feasibility_residual(const LinearProgramSpec& spec, const Vector& x) {
    double res = 0.0;
    for (Index j = 0; j < spec.num_vars; ++j) {
        res = std::max(res, spec.lower[j] - x[j]);
        res = std::max(res, x[j] - spec.upper[j]);
    }
    for (const auto& row : spec.rows) {
        double act = 0.0;
        for (const auto& [j, a] : row.coeffs) act += a * x[j];
        switch (row.sense) {
            case RowSense::le: res = std::max(res, act - row.rhs); break;
            case RowSense::ge: res = std::max(res, row.rhs - act); break;
            case RowSense::eq: res = std::max(res, std::abs(act - row.rhs)); break;
        }
    }
    return std::max(res, 0.0);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotEps = 1e-10;

enum class VarState : char { basic, at_lower, at_upper };

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Full-tableau simplex with upper-bounded variables. All internal variables
/// have lower bound 0; structural upper bounds are finite, slack/artificial
/// bounds are +inf (artificials are clamped to 0 after phase 1).
class SimplexTableau {
public:
    SimplexTableau(const LinearProgramSpec& spec, double tol, const Deadline& deadline)
        : spec_(spec), tol_(tol), deadline_(deadline) {}

    LpSolution run() {
        assemble();
        LpSolution out;
        if (num_artificial_ > 0) {
            Vector phase1_cost = Vector::Zero(total_vars_);
            for (Index j = first_artificial_; j < total_vars_; ++j) phase1_cost[j] = 1.0;
            const LpStatus st = optimize(phase1_cost);
            if (st == LpStatus::iteration_limit) {
                out.status = st;
                out.iterations = iterations_;
                return out;
            }
            const double infeas = current_cost(phase1_cost);
            if (infeas > tol_ * (1.0 + rhs_scale_)) {
                out.status = LpStatus::infeasible;
                out.iterations = iterations_;
                return out;
            }
            retire_artificials();
        }
        Vector cost = Vector::Zero(total_vars_);
        cost.head(spec_.num_vars) = spec_.objective;
        const LpStatus st = optimize(cost);
        out.status = st;
        out.iterations = iterations_;
        if (st == LpStatus::optimal) {
            out.x = structural_solution();
            out.value = spec_.objective.dot(out.x);
        }
        return out;
    }

private:
    void assemble() {
        const Index ns = spec_.num_vars;
        const Index m = static_cast<Index>(spec_.rows.size());
        shift_ = spec_.lower;

        // One slack per inequality row; artificials where no +1 slack exists
        // after rhs is made nonnegative.
        std::vector<double> row_rhs(static_cast<size_t>(m));
        std::vector<double> row_sign(static_cast<size_t>(m), 1.0);
        std::vector<double> slack_coeff(static_cast<size_t>(m), 0.0);
        Index num_slacks = 0;
        for (Index i = 0; i < m; ++i) {
            const auto& row = spec_.rows[static_cast<size_t>(i)];
            double rhs = row.rhs;
            for (const auto& [j, a] : row.coeffs) rhs -= a * shift_[j];
            if (rhs < 0.0) row_sign[static_cast<size_t>(i)] = -1.0;
            row_rhs[static_cast<size_t>(i)] = rhs * row_sign[static_cast<size_t>(i)];
            rhs_scale_ = std::max(rhs_scale_, std::abs(rhs));
            if (row.sense != RowSense::eq) {
                double sc = (row.sense == RowSense::le) ? 1.0 : -1.0;
                slack_coeff[static_cast<size_t>(i)] = sc * row_sign[static_cast<size_t>(i)];
                ++num_slacks;
            }
        }
        std::vector<Index> artificial_rows;
        for (Index i = 0; i < m; ++i)
            if (slack_coeff[static_cast<size_t>(i)] <= 0.0)
                artificial_rows.push_back(i);  // eq rows or negative slack

        num_artificial_ = static_cast<Index>(artificial_rows.size());
        first_slack_ = ns;
        first_artificial_ = ns + num_slacks;
        total_vars_ = first_artificial_ + num_artificial_;

        tableau_ = RowMatrix::Zero(m, total_vars_);
        rhs_ = Vector::Zero(m);
        upper_ = Vector::Constant(total_vars_, kInf);
        upper_.head(ns) = spec_.upper - spec_.lower;
        state_.assign(static_cast<size_t>(total_vars_), VarState::at_lower);
        basis_.assign(static_cast<size_t>(m), -1);
        banned_.assign(static_cast<size_t>(total_vars_), false);

        Index slack = first_slack_;
        Index art = first_artificial_;
        for (Index i = 0; i < m; ++i) {
            const auto& row = spec_.rows[static_cast<size_t>(i)];
            const double sign = row_sign[static_cast<size_t>(i)];
            for (const auto& [j, a] : row.coeffs) tableau_(i, j) += sign * a;
            rhs_[i] = row_rhs[static_cast<size_t>(i)];
            if (row.sense != RowSense::eq) {
                tableau_(i, slack) = slack_coeff[static_cast<size_t>(i)];
                ++slack;
            }
            if (slack_coeff[static_cast<size_t>(i)] > 0.0) {
                basis_[static_cast<size_t>(i)] = slack - 1;
                state_[static_cast<size_t>(slack - 1)] = VarState::basic;
            } else {
                tableau_(i, art) = 1.0;
                basis_[static_cast<size_t>(i)] = art;
                state_[static_cast<size_t>(art)] = VarState::basic;
                ++art;
            }
        }
    }

    double current_cost(const Vector& cost) const {
        double total = 0.0;
        for (Index j = 0; j < total_vars_; ++j) {
            if (state_[static_cast<size_t>(j)] == VarState::at_upper) total += cost[j] * upper_[j];
        }
        for (size_t i = 0; i < basis_.size(); ++i)
            total += cost[basis_[i]] * rhs_[static_cast<Index>(i)];
        return total;
    }

    void rebuild_zrow(const Vector& cost) {
        zrow_ = cost;
        for (size_t i = 0; i < basis_.size(); ++i) {
            const Index b = basis_[i];
            const double cb = zrow_[b];
            if (cb != 0.0) zrow_ -= cb * tableau_.row(static_cast<Index>(i)).transpose();
        }
    }

    LpStatus optimize(const Vector& cost) {
        rebuild_zrow(cost);
        const Index m = static_cast<Index>(basis_.size());
        const long max_iters = 20000 + 200L * (m + total_vars_);
        long degenerate_streak = 0;
        bool bland = false;
        while (true) {
            if ((iterations_ & 63) == 0) deadline_.check();
            if (iterations_ >= max_iters) return LpStatus::iteration_limit;

            // Entering variable: nonbasic improving reduced cost.
            Index enter = -1;
            double best = bland ? 0.0 : tol_;
            bool increasing = true;
            for (Index j = 0; j < total_vars_; ++j) {
                if (banned_[static_cast<size_t>(j)]) continue;
                const VarState st = state_[static_cast<size_t>(j)];
                if (st == VarState::basic) continue;
                const double d = zrow_[j];
                if (st == VarState::at_lower && d < -tol_) {
                    if (bland) { enter = j; increasing = true; break; }
                    if (-d > best) { best = -d; enter = j; increasing = true; }
                } else if (st == VarState::at_upper && d > tol_) {
                    if (bland) { enter = j; increasing = false; break; }
                    if (d > best) { best = d; enter = j; increasing = false; }
                }
            }
            if (enter < 0) return LpStatus::optimal;
            ++iterations_;

            // Ratio test along the entering direction. Ties go to the larger
            // pivot magnitude (stability) or, in Bland mode, to the smallest
            // basic variable index (anti-cycling).
            const double dir = increasing ? 1.0 : -1.0;
            double step = upper_[enter];  // bound-flip limit (may be +inf)
            Index pivot_row = -1;
            bool leaving_to_upper = false;
            double pivot_mag = 0.0;
            auto consider = [&](Index i, double t, double mag, bool to_upper) {
                t = std::max(t, 0.0);
                bool take = false;
                if (pivot_row < 0) {
                    take = t < step + kPivotEps;
                } else if (t < step - kPivotEps) {
                    take = true;
                } else if (t < step + kPivotEps) {
                    take = bland ? basis_[static_cast<size_t>(i)] <
                                       basis_[static_cast<size_t>(pivot_row)]
                                 : mag > pivot_mag;
                }
                if (take) {
                    step = std::min(step, t);
                    pivot_row = i;
                    pivot_mag = mag;
                    leaving_to_upper = to_upper;
                }
            };
            for (Index i = 0; i < m; ++i) {
                const double a = dir * tableau_(i, enter);
                const Index b = basis_[static_cast<size_t>(i)];
                if (a > kPivotEps) {  // basic value decreases toward 0
                    consider(i, rhs_[i] / a, std::abs(a), false);
                } else if (a < -kPivotEps && upper_[b] < kInf) {  // rises to its upper
                    consider(i, (upper_[b] - rhs_[i]) / (-a), std::abs(a), true);
                }
            }
            if (pivot_row < 0 && !std::isfinite(step)) return LpStatus::unbounded;

            if (step <= kPivotEps) {
                if (++degenerate_streak > 400 && !bland) {
                    bland = true;
                    degenerate_streak = 0;
                }
            } else {
                degenerate_streak = 0;
            }

            rhs_ -= (dir * step) * tableau_.col(enter);
            if (pivot_row < 0) {
                // Bound flip: the entering variable crosses its whole range.
                state_[static_cast<size_t>(enter)] =
                    increasing ? VarState::at_upper : VarState::at_lower;
                continue;
            }

            const Index leave = basis_[static_cast<size_t>(pivot_row)];
            state_[static_cast<size_t>(leave)] =
                leaving_to_upper ? VarState::at_upper : VarState::at_lower;
            state_[static_cast<size_t>(enter)] = VarState::basic;
            basis_[static_cast<size_t>(pivot_row)] = enter;
            rhs_[pivot_row] = increasing ? step : upper_[enter] - step;

            // Gaussian pivot on (pivot_row, enter); rhs_ already holds values.
            const double piv = tableau_(pivot_row, enter);
            tableau_.row(pivot_row) /= piv;
            for (Index i = 0; i < m; ++i) {
                if (i == pivot_row) continue;
                const double f = tableau_(i, enter);
                if (f != 0.0) tableau_.row(i) -= f * tableau_.row(pivot_row);
            }
            const double zf = zrow_[enter];
            if (zf != 0.0) zrow_ -= zf * tableau_.row(pivot_row).transpose();
        }
    }

    void retire_artificials() {
        const Index m = static_cast<Index>(basis_.size());
        for (Index i = 0; i < m; ++i) {
            const Index b = basis_[static_cast<size_t>(i)];
            if (b < first_artificial_) continue;
            // Pivot the artificial out on any usable column; else the row is
            // redundant and the artificial stays pinned at zero.
            Index enter = -1;
            for (Index j = 0; j < first_artificial_; ++j) {
                if (state_[static_cast<size_t>(j)] != VarState::basic &&
                    std::abs(tableau_(i, j)) > 1e-8) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) {
                const double entering_value = state_[static_cast<size_t>(enter)] == VarState::at_upper
                                                  ? upper_[enter]
                                                  : 0.0;
                state_[static_cast<size_t>(b)] = VarState::at_lower;
                state_[static_cast<size_t>(enter)] = VarState::basic;
                basis_[static_cast<size_t>(i)] = enter;
                rhs_[i] = entering_value;  // degenerate swap: values unchanged
                const double piv = tableau_(i, enter);
                tableau_.row(i) /= piv;
                for (Index k = 0; k < m; ++k) {
                    if (k == i) continue;
                    const double f = tableau_(k, enter);
                    if (f != 0.0) tableau_.row(k) -= f * tableau_.row(i);
                }
            }
        }
        for (Index j = first_artificial_; j < total_vars_; ++j) {
            banned_[static_cast<size_t>(j)] = true;
            upper_[j] = 0.0;
        }
    }

    Vector structural_solution() const {
        Vector x = Vector::Zero(spec_.num_vars);
        for (Index j = 0; j < spec_.num_vars; ++j)
            if (state_[static_cast<size_t>(j)] == VarState::at_upper) x[j] = upper_[j];
        for (size_t i = 0; i < basis_.size(); ++i) {
            const Index b = basis_[i];
            if (b < spec_.num_vars) x[b] = rhs_[static_cast<Index>(i)];
        }
        x += shift_;
        // Snap to the box; simplex roundoff never exceeds tiny margins here.
        for (Index j = 0; j < spec_.num_vars; ++j)
            x[j] = std::clamp(x[j], spec_.lower[j], spec_.upper[j]);
        return x;
    }

    const LinearProgramSpec& spec_;
    double tol_;
    const Deadline& deadline_;

    RowMatrix tableau_;
    Vector rhs_;
    Vector zrow_;
    Vector upper_;
    Vector shift_;
    std::vector<VarState> state_;
    std::vector<Index> basis_;
    std::vector<bool> banned_;
    Index first_slack_ = 0;
    Index first_artificial_ = 0;
    Index num_artificial_ = 0;
    Index total_vars_ = 0;
    double rhs_scale_ = 0.0;
    long iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgramSpec& spec, double tol, const Deadline& deadline) {
    spec.validate();
    SimplexTableau tableau(spec, tol, deadline);
    return tableau.run();
}

void write_lp_format(const LinearProgramSpec& spec, std::ostream& out) {
    auto term = [](double a, Index j, bool first) {
        std::string s;
        if (a < 0.0)
            s += first ? "- " : " - ";
        else if (!first)
            s += " + ";
        s += format_double(std::abs(a));
        s += " x";
        s += std::to_string(j);
        return s;
    };
    out << "Minimize\n obj: ";
    bool first = true;
    for (Index j = 0; j < spec.num_vars; ++j) {
        if (spec.objective[j] == 0.0) continue;
        out << term(spec.objective[j], j, first);
        first = false;
    }
    if (first) out << "0 x0";
    out << "\nSubject To\n";
    for (size_t i = 0; i < spec.rows.size(); ++i) {
        const auto& row = spec.rows[i];
        out << " c" << i << ": ";
        bool f = true;
        for (const auto& [j, a] : row.coeffs) {
            if (a == 0.0) continue;
            out << term(a, j, f);
            f = false;
        }
        if (f) out << "0 x0";
        const char* rel = row.sense == RowSense::le ? "<=" : (row.sense == RowSense::ge ? ">=" : "=");
        out << ' ' << rel << ' ' << format_double(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (Index j = 0; j < spec.num_vars; ++j)
        out << ' ' << format_double(spec.lower[j]) << " <= x" << j << " <= "
            << format_double(spec.upper[j]) << "\n";
    out << "End\n";
}

}  // namespace mlcc

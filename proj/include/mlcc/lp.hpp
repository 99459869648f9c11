#pragma once

#include <mlcc/deadline.hpp>
#include <mlcc/types.hpp>

#include <iosfwd>
#include <utility>
#include <vector>

namespace mlcc {

enum class RowSense { le, ge, eq };

struct LinearRow {
    std::vector<std::pair<Index, double>> coeffs;  // sparse (variable, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

/// min c.x  s.t.  rows,  lower <= x <= upper (finite box).
struct LinearProgramSpec {
    Index num_vars = 0;
    Vector objective;
    Vector lower;
    Vector upper;
    std::vector<LinearRow> rows;

    static LinearProgramSpec boxed(Index num_vars, double lo = 0.0, double hi = 1.0);
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    Vector x;
    double value = 0.0;
    long iterations = 0;
};

/// Dense two-phase primal simplex with native variable bounds. The returned
/// point is feasible within tol and optimal within tol of the true value.
LpSolution solve_lp(const LinearProgramSpec& spec, double tol = 1e-9,
                    const Deadline& deadline = {});

/// Largest bound/row violation of x against spec; 0 means feasible.
double lp_feasibility_residual(const LinearProgramSpec& spec, const Vector& x);

/// Writes the program in CPLEX LP text format (for external cross-checks).
void write_lp_format(const LinearProgramSpec& spec, std::ostream& out);

}  // namespace mlcc

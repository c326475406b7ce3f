#pragma once

#include <vector>

#include "radopf/conic_program.hpp"
#include "radopf/solver.hpp"
#include "radopf/standard_form.hpp"

namespace radopf {

/// Recovers model-level values and per-constraint duals from a standard-form
/// solution. Model variables occupy the leading free block, so primal
/// recovery is a prefix copy; duals are indexed through the bookkeeping
/// recorded during the transform.
struct StandardFormMap {
    int num_model_vars = 0;
    std::vector<int> row_eq;         // model row -> standard equality index
    std::vector<int> row_slack;      // model row -> slack variable (or -1)
    std::vector<int> cone_var_start; // model cone -> first member variable
    std::vector<int> cone_eq_start;  // model cone -> first member-tie equality

    std::vector<double> model_x(const ConicSolution& sol) const;
    /// Dual of a linear row: >= 0 for Le rows, <= 0 for Ge rows, free for Eq.
    /// Sensitivity convention: d(objective)/d(rhs) = -dual.
    double row_dual(const ConicSolution& sol, int row) const;
    /// Dual vector of a cone block, one entry per member.
    std::vector<double> cone_dual(const ConicSolution& sol, int cone) const;
    double slack_value(const ConicSolution& sol, int row) const;
};

struct StandardForm {
    StandardFormProgram program;
    StandardFormMap map;
};

/// Standard-form conversion: inequalities get nonnegative slacks; every cone
/// block becomes fresh member variables tied to their affine expressions.
StandardForm to_standard_form(const ConicProgram& model);

/// Convenience: transform and solve in one call.
struct ModelSolution {
    ConicSolution raw;
    StandardFormMap map;
    std::vector<double> x;            // model variable values (empty unless optimal)
    double objective = 0.0;           // model objective at x

    bool optimal() const { return raw.status == SolveStatus::Optimal; }
};

ModelSolution solve_model(const ConicProgram& model, const SolverSettings& settings = {});

}  // namespace radopf

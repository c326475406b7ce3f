#pragma once

#include <limits>
#include <string>
#include <vector>

#include "radopf/standard_form.hpp"

namespace radopf {

enum class SolveStatus {
    Optimal,
    PrimalInfeasible,  // certificate (y, z): A'y + z = 0, z in K*, b'y = -1
    DualInfeasible,    // certificate x: A x = 0, x in K, c'x = -1 (unbounded)
    NumericalLimit,
};

const char* status_name(SolveStatus status);

struct SolverSettings {
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iter = 200;
    bool verbose = false;
};

/// Primal and dual solution of a StandardFormProgram. The duals satisfy
/// c + A'y = z with z in the dual cone (zero on free coordinates), so the
/// dual objective is -b'y - obj_constant-adjusted accordingly. On infeasible
/// or unbounded outcomes the same fields carry the certificate, scaled as
/// documented on SolveStatus.
struct ConicSolution {
    SolveStatus status = SolveStatus::NumericalLimit;
    std::vector<double> x;
    std::vector<double> y;  // one per equality row
    std::vector<double> z;  // one per variable; zero on free blocks
    double objective = std::numeric_limits<double>::quiet_NaN();
    double primal_residual = std::numeric_limits<double>::infinity();
    double dual_residual = std::numeric_limits<double>::infinity();
    double rel_gap = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

/// Interior-point solve (homogeneous self-dual embedding, Nesterov-Todd
/// scaling, Mehrotra predictor-corrector). Deterministic: identical inputs
/// and settings reproduce the iterate sequence exactly.
ConicSolution solve(const StandardFormProgram& program, const SolverSettings& settings = {});

}  // namespace radopf

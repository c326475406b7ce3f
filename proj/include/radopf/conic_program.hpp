#pragma once

#include <string>
#include <vector>

namespace radopf {

/// Constraint family codes. Each row and cone of a ConicProgram carries one;
/// they identify the model constraint family a row was generated from and are
/// stable across releases (docs/constraint-families.md lists them).
enum class ConstraintFamily {
    BusFlowBalance,        // C1
    LineFlowDef,           // C2
    VoltageDrop,           // C3
    VoltageBound,          // C5
    CurrentBound,          // C6
    ApparentBound,         // C7
    Withdrawal,            // C11
    ConeRelaxation,        // C12
    LosslessFlow,          // C15
    LosslessVoltageDrop,   // C16
    LosslessVoltageBound,  // C17
    ForwardFlowHalfPlane,  // C18
    ShuntLosslessFlow,     // C19
    ShuntLosslessVoltageDrop,  // C20
    UpperFlow,             // C21
    UpperCurrentBottom,    // C22
    UpperCurrentTop,       // C23
    EndpointFlows,         // C24
    UpperVoltageBound,     // C25
    CurrentBoundBottom,    // C26
    CurrentBoundTop,       // C27
    FlowBracket,           // C28
    RootImport,            // OBJ (objective-side rows: fixed import, epigraph)
};

const char* family_code(ConstraintFamily family);

/// Role markers for dual diagnostics.
enum class RowRole { Generic, UpperVoltage, LowerVoltage, CurrentBound, ApparentBound };

struct LinearTerm {
    int var = 0;
    double coef = 0.0;
};

/// sum(coef * x[var]) + constant
struct AffineExpr {
    std::vector<LinearTerm> terms;
    double constant = 0.0;

    AffineExpr& add(int var, double coef) {
        if (coef != 0.0) terms.push_back({var, coef});
        return *this;
    }
    double eval(const std::vector<double>& x) const;
};

enum class Relation { Eq, Le, Ge };

struct LinearRow {
    AffineExpr lhs;
    Relation rel = Relation::Eq;
    double rhs = 0.0;
    ConstraintFamily family = ConstraintFamily::BusFlowBalance;
    RowRole role = RowRole::Generic;
    int element = 0;  // bus or line id the row belongs to, 0 if none
};

enum class ConeKind {
    Soc,   // m0 >= sqrt(m1^2 + ... + mk^2)
    Rsoc,  // 2 m0 m1 >= m2^2 + ... + mk^2,  m0 >= 0, m1 >= 0
};

struct ConeBlock {
    ConeKind kind = ConeKind::Soc;
    std::vector<AffineExpr> members;
    ConstraintFamily family = ConstraintFamily::ConeRelaxation;
    RowRole role = RowRole::Generic;
    int element = 0;
};

/// Linear + second-order-cone program over a dense variable index,
/// built by the formulation layer and handed to the solver bridge.
struct ConicProgram {
    std::vector<std::string> var_names;
    AffineExpr objective;  // minimized
    std::vector<LinearRow> rows;
    std::vector<ConeBlock> cones;

    int num_vars() const { return static_cast<int>(var_names.size()); }
    int add_var(std::string name);

    LinearRow& add_row(AffineExpr lhs, Relation rel, double rhs, ConstraintFamily family,
                       int element = 0, RowRole role = RowRole::Generic);
    ConeBlock& add_cone(ConeKind kind, std::vector<AffineExpr> members, ConstraintFamily family,
                        int element = 0, RowRole role = RowRole::Generic);

    /// Index validity and provenance completeness; throws std::logic_error.
    void validate() const;

    /// Distinct family codes present, sorted.
    std::vector<std::string> family_codes() const;
};

}  // namespace radopf

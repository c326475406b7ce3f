#include "radopf/conic_program.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace radopf {

const char* family_code(ConstraintFamily family) {
    switch (family) {
        case ConstraintFamily::BusFlowBalance: return "C1";
        case ConstraintFamily::LineFlowDef: return "C2";
        case ConstraintFamily::VoltageDrop: return "C3";
        case ConstraintFamily::VoltageBound: return "C5";
        case ConstraintFamily::CurrentBound: return "C6";
        case ConstraintFamily::ApparentBound: return "C7";
        case ConstraintFamily::Withdrawal: return "C11";
        case ConstraintFamily::ConeRelaxation: return "C12";
        case ConstraintFamily::LosslessFlow: return "C15";
        case ConstraintFamily::LosslessVoltageDrop: return "C16";
        case ConstraintFamily::LosslessVoltageBound: return "C17";
        case ConstraintFamily::ForwardFlowHalfPlane: return "C18";
        case ConstraintFamily::ShuntLosslessFlow: return "C19";
        case ConstraintFamily::ShuntLosslessVoltageDrop: return "C20";
        case ConstraintFamily::UpperFlow: return "C21";
        case ConstraintFamily::UpperCurrentBottom: return "C22";
        case ConstraintFamily::UpperCurrentTop: return "C23";
        case ConstraintFamily::EndpointFlows: return "C24";
        case ConstraintFamily::UpperVoltageBound: return "C25";
        case ConstraintFamily::CurrentBoundBottom: return "C26";
        case ConstraintFamily::CurrentBoundTop: return "C27";
        case ConstraintFamily::FlowBracket: return "C28";
        case ConstraintFamily::RootImport: return "OBJ";
    }
    return "?";
}

double AffineExpr::eval(const std::vector<double>& x) const {
    double v = constant;
    for (const LinearTerm& t : terms) v += t.coef * x.at(static_cast<size_t>(t.var));
    return v;
}

int ConicProgram::add_var(std::string name) {
    var_names.push_back(std::move(name));
    return static_cast<int>(var_names.size()) - 1;
}

LinearRow& ConicProgram::add_row(AffineExpr lhs, Relation rel, double rhs, ConstraintFamily family,
                                 int element, RowRole role) {
    LinearRow row;
    row.lhs = std::move(lhs);
    row.rel = rel;
    row.rhs = rhs;
    row.family = family;
    row.role = role;
    row.element = element;
    rows.push_back(std::move(row));
    return rows.back();
}

ConeBlock& ConicProgram::add_cone(ConeKind kind, std::vector<AffineExpr> members,
                                  ConstraintFamily family, int element, RowRole role) {
    if (members.size() < 2 || (kind == ConeKind::Rsoc && members.size() < 3))
        throw std::logic_error("cone block needs at least 2 (soc) or 3 (rsoc) members");
    ConeBlock cone;
    cone.kind = kind;
    cone.members = std::move(members);
    cone.family = family;
    cone.role = role;
    cone.element = element;
    cones.push_back(std::move(cone));
    return cones.back();
}

void ConicProgram::validate() const {
    const int n = num_vars();
    auto check_expr = [&](const AffineExpr& e, const char* where) {
        for (const LinearTerm& t : e.terms)
            if (t.var < 0 || t.var >= n)
                throw std::logic_error(std::string("variable index out of range in ") + where);
    };
    check_expr(objective, "objective");
    for (const LinearRow& row : rows) check_expr(row.lhs, "row");
    for (const ConeBlock& cone : cones)
        for (const AffineExpr& m : cone.members) check_expr(m, "cone");
}

std::vector<std::string> ConicProgram::family_codes() const {
    std::set<std::string> codes;
    for (const LinearRow& row : rows) codes.insert(family_code(row.family));
    for (const ConeBlock& cone : cones) codes.insert(family_code(cone.family));
    return {codes.begin(), codes.end()};
}

}  // namespace radopf

#include "radopf/transform.hpp"

#include <map>
#include <stdexcept>

namespace radopf {

namespace {

std::vector<Entry> collect(const AffineExpr& expr, double scale) {
    std::map<int, double> acc;
    for (const LinearTerm& t : expr.terms) acc[t.var] += scale * t.coef;
    std::vector<Entry> out;
    out.reserve(acc.size());
    for (auto [col, val] : acc)
        if (val != 0.0) out.push_back({col, val});
    return out;
}

}  // namespace

StandardForm to_standard_form(const ConicProgram& model) {
    model.validate();
    StandardForm sf;
    StandardFormProgram& p = sf.program;
    StandardFormMap& map = sf.map;

    const int n_model = model.num_vars();
    map.num_model_vars = n_model;

    int n_slack = 0;
    for (const LinearRow& row : model.rows)
        if (row.rel != Relation::Eq) ++n_slack;
    int n_cone_vars = 0;
    for (const ConeBlock& cone : model.cones) n_cone_vars += static_cast<int>(cone.members.size());

    p.num_vars = n_model + n_slack + n_cone_vars;
    if (n_model > 0) p.blocks.push_back({BlockKind::Free, n_model});
    if (n_slack > 0) p.blocks.push_back({BlockKind::NonNeg, n_slack});

    p.c.assign(static_cast<size_t>(p.num_vars), 0.0);
    for (const LinearTerm& t : model.objective.terms) p.c[static_cast<size_t>(t.var)] += t.coef;
    p.obj_constant = model.objective.constant;

    int next_slack = n_model;
    for (const LinearRow& row : model.rows) {
        std::vector<Entry> entries = collect(row.lhs, 1.0);
        int slack = -1;
        if (row.rel == Relation::Le) {
            slack = next_slack++;
            entries.push_back({slack, 1.0});
        } else if (row.rel == Relation::Ge) {
            slack = next_slack++;
            entries.push_back({slack, -1.0});
        }
        map.row_eq.push_back(p.num_rows());
        map.row_slack.push_back(slack);
        p.rows.push_back(std::move(entries));
        p.rhs.push_back(row.rhs - row.lhs.constant);
    }

    int next_var = n_model + n_slack;
    for (const ConeBlock& cone : model.cones) {
        map.cone_var_start.push_back(next_var);
        map.cone_eq_start.push_back(p.num_rows());
        for (const AffineExpr& member : cone.members) {
            // t = member(x): emit t - sum(terms) = constant.
            std::vector<Entry> entries = collect(member, -1.0);
            entries.push_back({next_var, 1.0});
            p.rows.push_back(std::move(entries));
            p.rhs.push_back(member.constant);
            ++next_var;
        }
        p.blocks.push_back({cone.kind == ConeKind::Soc ? BlockKind::Soc : BlockKind::Rsoc,
                            static_cast<int>(cone.members.size())});
    }
    p.validate();
    return sf;
}

std::vector<double> StandardFormMap::model_x(const ConicSolution& sol) const {
    return {sol.x.begin(), sol.x.begin() + num_model_vars};
}

double StandardFormMap::row_dual(const ConicSolution& sol, int row) const {
    return sol.y.at(static_cast<size_t>(row_eq.at(static_cast<size_t>(row))));
}

std::vector<double> StandardFormMap::cone_dual(const ConicSolution& sol, int cone) const {
    int start = cone_var_start.at(static_cast<size_t>(cone));
    int end = (static_cast<size_t>(cone) + 1 < cone_var_start.size())
                  ? cone_var_start[static_cast<size_t>(cone) + 1]
                  : static_cast<int>(sol.z.size());
    return {sol.z.begin() + start, sol.z.begin() + end};
}

double StandardFormMap::slack_value(const ConicSolution& sol, int row) const {
    int slack = row_slack.at(static_cast<size_t>(row));
    if (slack < 0) throw std::logic_error("row has no slack (equality)");
    return sol.x.at(static_cast<size_t>(slack));
}

ModelSolution solve_model(const ConicProgram& model, const SolverSettings& settings) {
    StandardForm sf = to_standard_form(model);
    ModelSolution out;
    out.map = sf.map;
    out.raw = solve(sf.program, settings);
    if (out.raw.status == SolveStatus::Optimal) {
        out.x = out.map.model_x(out.raw);
        out.objective = out.raw.objective;
    }
    return out;
}

}  // namespace radopf

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include "radopf/solver.hpp"
#include "radopf/standard_form.hpp"
#include "radopf/transform.hpp"

using namespace radopf;

namespace {

ConicProgram lower_bound_lp() {
    ConicProgram m;
    int x = m.add_var("x");
    m.objective.add(x, 1.0);
    m.add_row(AffineExpr().add(x, 1.0), Relation::Ge, 3.0, ConstraintFamily::Withdrawal);
    return m;
}

}  // namespace

TEST_CASE("one-dimensional lp: min x subject to x >= 3") {
    auto ms = solve_model(lower_bound_lp());
    REQUIRE(ms.optimal());
    CHECK(ms.x[0] == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(ms.objective == doctest::Approx(3.0).epsilon(1e-8));
    // Convention: d(objective)/d(rhs) = -dual; tightening the bound by one
    // unit raises the optimum by one.
    CHECK(ms.map.row_dual(ms.raw, 0) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("soc projection: min t subject to t >= |(3,4)|") {
    ConicProgram m;
    int t = m.add_var("t");
    m.objective.add(t, 1.0);
    AffineExpr e0;
    e0.add(t, 1.0);
    AffineExpr e1;
    e1.constant = 3.0;
    AffineExpr e2;
    e2.constant = 4.0;
    m.add_cone(ConeKind::Soc, {e0, e1, e2}, ConstraintFamily::ConeRelaxation);
    auto ms = solve_model(m);
    REQUIRE(ms.optimal());
    CHECK(ms.x[0] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("rotated cone: min u subject to 2 u >= 9") {
    ConicProgram m;
    int u = m.add_var("u");
    m.objective.add(u, 1.0);
    AffineExpr e0;
    e0.add(u, 1.0);
    AffineExpr one;
    one.constant = 1.0;
    AffineExpr w;
    w.constant = 3.0;
    m.add_cone(ConeKind::Rsoc, {e0, one, w}, ConstraintFamily::ConeRelaxation);
    auto ms = solve_model(m);
    REQUIRE(ms.optimal());
    CHECK(ms.x[0] == doctest::Approx(4.5).epsilon(1e-8));
}

TEST_CASE("small lp with equality") {
    ConicProgram m;
    int x = m.add_var("x"), y = m.add_var("y");
    m.objective.add(x, 1.0).add(y, 2.0);
    AffineExpr bal;
    bal.add(x, 1.0).add(y, 1.0);
    m.add_row(bal, Relation::Eq, 1.0, ConstraintFamily::BusFlowBalance);
    m.add_row(AffineExpr().add(x, 1.0), Relation::Ge, 0.0, ConstraintFamily::Withdrawal);
    m.add_row(AffineExpr().add(y, 1.0), Relation::Ge, 0.0, ConstraintFamily::Withdrawal);
    auto ms = solve_model(m);
    REQUIRE(ms.optimal());
    CHECK(ms.x[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(ms.x[1] == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("infeasible box is certified") {
    ConicProgram m;
    int x = m.add_var("x");
    m.objective.add(x, 1.0);
    m.add_row(AffineExpr().add(x, 1.0), Relation::Ge, 1.0, ConstraintFamily::Withdrawal);
    m.add_row(AffineExpr().add(x, 1.0), Relation::Le, 0.0, ConstraintFamily::Withdrawal);
    auto ms = solve_model(m);
    CHECK(ms.raw.status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("unbounded direction is certified") {
    ConicProgram m;
    int x = m.add_var("x");
    m.objective.add(x, -1.0);
    m.add_row(AffineExpr().add(x, 1.0), Relation::Ge, 0.0, ConstraintFamily::Withdrawal);
    auto ms = solve_model(m);
    CHECK(ms.raw.status == SolveStatus::DualInfeasible);
}

TEST_CASE("presolve: contradictory duplicate rows certified without iterating") {
    StandardFormProgram p;
    p.num_vars = 2;
    p.blocks = {{BlockKind::Free, 2}};
    p.c = {1.0, 0.0};
    p.rows = {{{0, 1.0}, {1, 2.0}}, {{0, 1.0}, {1, 2.0}}};
    p.rhs = {1.0, 2.0};
    auto sol = solve(p);
    CHECK(sol.status == SolveStatus::PrimalInfeasible);
    CHECK(sol.iterations == 0);
    // Farkas: A'y = 0 and b'y = -1.
    double by = sol.y[0] * 1.0 + sol.y[1] * 2.0;
    CHECK(by == doctest::Approx(-1.0));
    CHECK(sol.y[0] + sol.y[1] == doctest::Approx(0.0));
}

TEST_CASE("rotated-cone isometry preserves membership both ways") {
    std::mt19937 rng(7);
    auto uni = [&rng]() { return (rng() >> 8) * (1.0 / 16777216.0); };
    for (int trial = 0; trial < 100; ++trial) {
        int dim = 3 + static_cast<int>(uni() * 3);
        std::vector<double> v(static_cast<size_t>(dim));
        // random interior rotated-cone point
        double sq = 0.0;
        for (int i = 2; i < dim; ++i) {
            v[static_cast<size_t>(i)] = 2.0 * uni() - 1.0;
            sq += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
        }
        v[0] = 0.5 + uni();
        v[1] = sq / (2.0 * v[0]) + 0.1 + uni();
        REQUIRE(in_rsoc(v.data(), dim));
        auto w = rsoc_soc_isometry(v);
        CHECK(in_soc(w.data(), dim, 1e-12));
        auto back = rsoc_soc_isometry(w);
        for (int i = 0; i < dim; ++i)
            CHECK(back[static_cast<size_t>(i)] == doctest::Approx(v[static_cast<size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("standard-form file round-trips exactly") {
    ConicProgram m;
    int x = m.add_var("x"), y = m.add_var("y"), t = m.add_var("t");
    m.objective.add(x, 0.12345678901234567).add(t, 1.0);
    m.objective.constant = -0.25;
    AffineExpr bal;
    bal.add(x, 1.0 / 3.0).add(y, -2.0e-7);
    m.add_row(bal, Relation::Le, 1.0 + 1e-15, ConstraintFamily::VoltageDrop);
    AffineExpr e0;
    e0.add(t, 1.0);
    AffineExpr e1;
    e1.add(x, 1.0);
    e1.constant = 0.1;
    AffineExpr e2;
    e2.add(y, std::sqrt(2.0));
    m.add_cone(ConeKind::Rsoc, {e0, e1, e2}, ConstraintFamily::ConeRelaxation);

    auto sf = to_standard_form(m);
    const char* path = "roundtrip.sfp";
    export_standard_form(sf.program, path);
    auto back = import_standard_form(path);
    REQUIRE(back.num_vars == sf.program.num_vars);
    CHECK(back.obj_constant == sf.program.obj_constant);
    REQUIRE(back.c.size() == sf.program.c.size());
    for (size_t i = 0; i < back.c.size(); ++i) CHECK(back.c[i] == sf.program.c[i]);
    REQUIRE(back.blocks.size() == sf.program.blocks.size());
    for (size_t i = 0; i < back.blocks.size(); ++i) {
        CHECK(back.blocks[i].kind == sf.program.blocks[i].kind);
        CHECK(back.blocks[i].size == sf.program.blocks[i].size);
    }
    REQUIRE(back.rows.size() == sf.program.rows.size());
    for (size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rhs[i] == sf.program.rhs[i]);
        REQUIRE(back.rows[i].size() == sf.program.rows[i].size());
        for (size_t j = 0; j < back.rows[i].size(); ++j) {
            CHECK(back.rows[i][j].col == sf.program.rows[i][j].col);
            CHECK(back.rows[i][j].val == sf.program.rows[i][j].val);
        }
    }
    // A second export of the imported program is byte-identical.
    const char* path2 = "roundtrip2.sfp";
    export_standard_form(back, path2);
    auto slurp = [](const char* f) {
        std::string all;
        char buf[4096];
        std::FILE* fp = std::fopen(f, "rb");
        REQUIRE(fp != nullptr);
        size_t got;
        while ((got = std::fread(buf, 1, sizeof(buf), fp)) > 0) all.append(buf, got);
        std::fclose(fp);
        return all;
    };
    CHECK(slurp(path) == slurp(path2));
    std::remove(path);
    std::remove(path2);
}

TEST_CASE("corrupted header is a schema error") {
    const char* path = "bad.sfp";
    std::FILE* fp = std::fopen(path, "w");
    std::fputs("radopf-sfp v999\nvars 1\n", fp);
    std::fclose(fp);
    CHECK_THROWS_WITH_AS(import_standard_form(path), doctest::Contains("schema-version mismatch"),
                         std::runtime_error);
    std::remove(path);
}

TEST_CASE("determinism: identical inputs give identical outputs") {
    ConicProgram m;
    int x = m.add_var("x"), y = m.add_var("y"), t = m.add_var("t");
    m.objective.add(x, 1.0).add(y, 0.5).add(t, 2.0);
    AffineExpr bal;
    bal.add(x, 1.0).add(y, 1.0);
    m.add_row(bal, Relation::Eq, 2.0, ConstraintFamily::BusFlowBalance);
    AffineExpr e0;
    e0.add(t, 1.0);
    AffineExpr e1;
    e1.add(x, 1.0);
    e1.constant = -0.3;
    AffineExpr e2;
    e2.add(y, 1.0);
    e2.constant = -0.7;
    m.add_cone(ConeKind::Soc, {e0, e1, e2}, ConstraintFamily::ConeRelaxation);
    auto a = solve_model(m);
    auto b = solve_model(m);
    REQUIRE(a.optimal());
    REQUIRE(b.optimal());
    CHECK(a.raw.iterations == b.raw.iterations);
    REQUIRE(a.x.size() == b.x.size());
    for (size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);  // bitwise
}

namespace {

struct RandomProgram {
    StandardFormProgram program;
    bool feasible_bounded = false;
};

// Feasible bounded instances are built from a strictly feasible primal-dual
// pair; infeasible ones from a Farkas certificate; unbounded ones from a
// cone ray in the nullspace of A.
RandomProgram make_random(std::mt19937& rng, int kind) {
    auto uni = [&rng]() { return (rng() >> 8) * (1.0 / 16777216.0); };
    auto gauss = [&]() {
        double u1 = std::max(uni(), 1e-12), u2 = uni();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };
    RandomProgram out;
    StandardFormProgram& p = out.program;
    int n_free = 1 + static_cast<int>(uni() * 3);
    int n_pos = 2 + static_cast<int>(uni() * 4);
    int soc_dim = 3 + static_cast<int>(uni() * 2);
    int rsoc_dim = 3;
    p.blocks = {{BlockKind::Free, n_free},
                {BlockKind::NonNeg, n_pos},
                {BlockKind::Soc, soc_dim},
                {BlockKind::Rsoc, rsoc_dim}};
    int n = n_free + n_pos + soc_dim + rsoc_dim;
    p.num_vars = n;
    int prows = 2 + static_cast<int>(uni() * 3);

    // interior cone point
    std::vector<double> x0(static_cast<size_t>(n));
    std::vector<double> z0(static_cast<size_t>(n), 0.0);
    int base = 0;
    for (int i = 0; i < n_free; ++i) x0[static_cast<size_t>(base + i)] = gauss();
    base += n_free;
    for (int i = 0; i < n_pos; ++i) {
        x0[static_cast<size_t>(base + i)] = 0.2 + uni();
        z0[static_cast<size_t>(base + i)] = 0.2 + uni();
    }
    base += n_pos;
    auto fill_soc = [&](std::vector<double>& v, int start, int dim) {
        double norm = 0.0;
        for (int i = 1; i < dim; ++i) {
            v[static_cast<size_t>(start + i)] = gauss() * 0.3;
            norm += v[static_cast<size_t>(start + i)] * v[static_cast<size_t>(start + i)];
        }
        v[static_cast<size_t>(start)] = std::sqrt(norm) + 0.3 + uni();
    };
    auto fill_rsoc = [&](std::vector<double>& v, int start, int dim) {
        double sq = 0.0;
        for (int i = 2; i < dim; ++i) {
            v[static_cast<size_t>(start + i)] = gauss() * 0.3;
            sq += v[static_cast<size_t>(start + i)] * v[static_cast<size_t>(start + i)];
        }
        v[static_cast<size_t>(start)] = 0.3 + uni();
        v[static_cast<size_t>(start + 1)] = sq / (2.0 * v[static_cast<size_t>(start)]) + 0.3 + uni();
    };
    fill_soc(x0, base, soc_dim);
    fill_soc(z0, base, soc_dim);
    base += soc_dim;
    fill_rsoc(x0, base, rsoc_dim);
    fill_rsoc(z0, base, rsoc_dim);

    std::vector<std::vector<double>> a(static_cast<size_t>(prows), std::vector<double>(static_cast<size_t>(n)));
    for (auto& row : a)
        for (double& v : row) v = gauss();

    p.rows.resize(static_cast<size_t>(prows));
    p.rhs.resize(static_cast<size_t>(prows));
    p.c.assign(static_cast<size_t>(n), 0.0);

    if (kind == 0) {
        // strictly feasible and bounded: b = A x0, c = A'y0 + z0
        out.feasible_bounded = true;
        std::vector<double> y0(static_cast<size_t>(prows));
        for (double& v : y0) v = gauss();
        for (int i = 0; i < prows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += a[static_cast<size_t>(i)][static_cast<size_t>(j)] * x0[static_cast<size_t>(j)];
            p.rhs[static_cast<size_t>(i)] = acc;
        }
        for (int j = 0; j < n; ++j) {
            double acc = z0[static_cast<size_t>(j)];
            for (int i = 0; i < prows; ++i) acc -= a[static_cast<size_t>(i)][static_cast<size_t>(j)] * y0[static_cast<size_t>(i)];
            p.c[static_cast<size_t>(j)] = acc;  // c + A'y0 = z0
        }
    } else if (kind == 1) {
        // primal infeasible: force A'y0 = z0 with rank-one correction, b'y0 = 1
        std::vector<double> y0(static_cast<size_t>(prows));
        double ynorm2 = 0.0;
        for (double& v : y0) {
            v = gauss();
            ynorm2 += v * v;
        }
        if (ynorm2 < 1e-6) {
            y0[0] = 1.0;
            ynorm2 = 1.0;
        }
        // residual r = z0 - A'y0 per column; A += y0 r'/||y0||^2 fixes it
        for (int j = 0; j < n; ++j) {
            double aty = 0.0;
            for (int i = 0; i < prows; ++i) aty += a[static_cast<size_t>(i)][static_cast<size_t>(j)] * y0[static_cast<size_t>(i)];
            double r = z0[static_cast<size_t>(j)] - aty;
            for (int i = 0; i < prows; ++i)
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] += y0[static_cast<size_t>(i)] * r / ynorm2;
        }
        // now A'y0 = z0 in K*, pick b with b'y0 = 1 > 0  => A x = b infeasible
        for (int i = 0; i < prows; ++i) p.rhs[static_cast<size_t>(i)] = gauss();
        double by = 0.0;
        for (int i = 0; i < prows; ++i) by += p.rhs[static_cast<size_t>(i)] * y0[static_cast<size_t>(i)];
        double shift = (1.0 - by) / ynorm2;
        for (int i = 0; i < prows; ++i) p.rhs[static_cast<size_t>(i)] += shift * y0[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) p.c[static_cast<size_t>(j)] = gauss();
    } else {
        // unbounded: ray x0 in ker(A) with c'x0 = -1, b from another feasible point
        std::vector<double> xf(static_cast<size_t>(n));
        for (int j = 0; j < n_free; ++j) xf[static_cast<size_t>(j)] = gauss();
        for (int j = n_free; j < n; ++j) xf[static_cast<size_t>(j)] = x0[static_cast<size_t>(j)] * 1.5;
        double xnorm2 = 0.0;
        for (int j = 0; j < n; ++j) xnorm2 += x0[static_cast<size_t>(j)] * x0[static_cast<size_t>(j)];
        for (int i = 0; i < prows; ++i) {
            double ax = 0.0;
            for (int j = 0; j < n; ++j) ax += a[static_cast<size_t>(i)][static_cast<size_t>(j)] * x0[static_cast<size_t>(j)];
            for (int j = 0; j < n; ++j)
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= ax * x0[static_cast<size_t>(j)] / xnorm2;
        }
        for (int i = 0; i < prows; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += a[static_cast<size_t>(i)][static_cast<size_t>(j)] * xf[static_cast<size_t>(j)];
            p.rhs[static_cast<size_t>(i)] = acc;
        }
        for (int j = 0; j < n; ++j) p.c[static_cast<size_t>(j)] = gauss();
        double cx = 0.0;
        for (int j = 0; j < n; ++j) cx += p.c[static_cast<size_t>(j)] * x0[static_cast<size_t>(j)];
        double shift = (-1.0 - cx) / xnorm2;
        for (int j = 0; j < n; ++j) p.c[static_cast<size_t>(j)] += shift * x0[static_cast<size_t>(j)];
    }
    for (int i = 0; i < prows; ++i) {
        p.rows[static_cast<size_t>(i)].clear();
        for (int j = 0; j < n; ++j)
            p.rows[static_cast<size_t>(i)].push_back({j, a[static_cast<size_t>(i)][static_cast<size_t>(j)]});
    }
    return out;
}

}  // namespace

TEST_CASE("random certified instances: optimality, infeasibility, unboundedness") {
    std::mt19937 rng(12345);
    int optimal = 0, infeasible = 0, unbounded = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int kind = trial % 3;
        auto rp = make_random(rng, kind);
        auto sol = solve(rp.program);
        if (kind == 0) {
            REQUIRE(sol.status == SolveStatus::Optimal);
            CHECK(sol.primal_residual <= 1e-8);
            CHECK(sol.dual_residual <= 1e-8);
            CHECK(sol.rel_gap <= 1e-8);
            ++optimal;
        } else if (kind == 1) {
            REQUIRE(sol.status == SolveStatus::PrimalInfeasible);
            ++infeasible;
        } else {
            REQUIRE(sol.status == SolveStatus::DualInfeasible);
            ++unbounded;
        }
    }
    CHECK(optimal == 20);
    CHECK(infeasible == 20);
    CHECK(unbounded == 20);
}

TEST_CASE("random model programs map back with matching objective") {
    std::mt19937 rng(99);
    auto uni = [&rng]() { return (rng() >> 8) * (1.0 / 16777216.0); };
    for (int trial = 0; trial < 20; ++trial) {
        // ~30-variable model with boxes and a few cones; bounded since every
        // variable is boxed.
        ConicProgram m;
        int nv = 30;
        for (int j = 0; j < nv; ++j) m.add_var("x" + std::to_string(j));
        for (int j = 0; j < nv; ++j) {
            m.objective.add(j, 2.0 * uni() - 1.0);
            m.add_row(AffineExpr().add(j, 1.0), Relation::Le, 1.0 + uni(), ConstraintFamily::Withdrawal);
            m.add_row(AffineExpr().add(j, 1.0), Relation::Ge, -1.0 - uni(), ConstraintFamily::Withdrawal);
        }
        for (int k = 0; k < 4; ++k) {
            AffineExpr head;
            head.add(static_cast<int>(uni() * nv), 1.0);
            head.constant = 2.5;
            AffineExpr m1;
            m1.add(static_cast<int>(uni() * nv), 1.0).add(static_cast<int>(uni() * nv), -0.5);
            AffineExpr m2;
            m2.add(static_cast<int>(uni() * nv), 0.7);
            m2.constant = 0.1;
            m.add_cone(ConeKind::Soc, {head, m1, m2}, ConstraintFamily::ConeRelaxation);
        }
        auto ms = solve_model(m);
        REQUIRE(ms.optimal());
        double obj = m.objective.eval(ms.x);
        CHECK(obj == doctest::Approx(ms.objective).epsilon(1e-8));
    }
}

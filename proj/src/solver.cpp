#include "radopf/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace radopf {

const char* status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::PrimalInfeasible: return "infeasible";
        case SolveStatus::DualInfeasible: return "unbounded";
        case SolveStatus::NumericalLimit: return "numerical-limit";
    }
    return "?";
}

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStaticReg = 1e-9;
constexpr double kStepFrac = 0.99;

struct SocBlock {
    int start = 0;  // first cone coordinate
    int dim = 0;
};

/// Problem after canonicalization: x free, equalities A x = b, and selected
/// coordinates constrained as s = Sel(x), s in (nonneg x soc...). Rotated
/// blocks were mapped to plain second-order cones by an orthogonal involution
/// applied to the matching columns of A and c.
struct Canonical {
    int n = 0;
    int p = 0;  // rows kept after presolve
    std::vector<std::vector<Entry>> arows;
    Vec b;
    Vec c;
    std::vector<int> coord_var;  // cone coordinate -> variable
    int num_nonneg = 0;          // leading cone coordinates are nonneg
    std::vector<SocBlock> socs;  // remaining coordinates, per block
    std::vector<int> rotated_starts;  // variable index of each rotated pair
    std::vector<int> kept_rows;       // canonical row -> original row
    int orig_rows = 0;
    // Set when presolve already decides the outcome.
    bool decided = false;
    ConicSolution early;
};

int cone_dim(const Canonical& c) { return static_cast<int>(c.coord_var.size()); }
int cone_degree(const Canonical& c) { return c.num_nonneg + static_cast<int>(c.socs.size()); }

void rotate_pair(double& a, double& b) {
    const double inv_sqrt2 = 0.7071067811865475244;
    double u = (a + b) * inv_sqrt2;
    double v = (a - b) * inv_sqrt2;
    a = u;
    b = v;
}

Canonical canonicalize(const StandardFormProgram& prog) {
    Canonical cn;
    cn.n = prog.num_vars;
    cn.orig_rows = prog.num_rows();
    cn.c = Vec::Zero(cn.n);
    for (int j = 0; j < cn.n; ++j) cn.c[j] = prog.c[static_cast<size_t>(j)];

    int base = 0;
    std::vector<std::pair<int, int>> soc_var_ranges;
    for (const ConeSpan& blk : prog.blocks) {
        switch (blk.kind) {
            case BlockKind::Free: break;
            case BlockKind::NonNeg:
                for (int k = 0; k < blk.size; ++k) cn.coord_var.push_back(base + k);
                cn.num_nonneg += blk.size;
                break;
            case BlockKind::Rsoc:
                cn.rotated_starts.push_back(base);
                [[fallthrough]];
            case BlockKind::Soc:
                soc_var_ranges.emplace_back(base, blk.size);
                break;
        }
        base += blk.size;
    }
    for (auto [start, dim] : soc_var_ranges) {
        SocBlock sb;
        sb.start = cone_dim(cn);
        sb.dim = dim;
        for (int k = 0; k < dim; ++k) cn.coord_var.push_back(start + k);
        cn.socs.push_back(sb);
    }

    // Rotated blocks: substitute x = T x~ column-wise in c and A.
    std::vector<std::vector<Entry>> rows = prog.rows;
    for (int rs : cn.rotated_starts) rotate_pair(cn.c[rs], cn.c[rs + 1]);
    if (!cn.rotated_starts.empty()) {
        std::vector<int> rot_of(static_cast<size_t>(cn.n), -1);
        for (int rs : cn.rotated_starts) {
            rot_of[static_cast<size_t>(rs)] = rs;
            rot_of[static_cast<size_t>(rs) + 1] = rs;
        }
        for (auto& row : rows) {
            // Gather the coefficients of each touched rotated pair.
            std::map<int, std::pair<double, double>> pairs;
            for (const Entry& e : row) {
                int rs = rot_of[static_cast<size_t>(e.col)];
                if (rs < 0) continue;
                auto& pr = pairs[rs];
                (e.col == rs ? pr.first : pr.second) = e.val;
            }
            if (pairs.empty()) continue;
            std::vector<Entry> rebuilt;
            rebuilt.reserve(row.size() + pairs.size());
            for (const Entry& e : row)
                if (rot_of[static_cast<size_t>(e.col)] < 0) rebuilt.push_back(e);
            for (auto& [rs, pr] : pairs) {
                rotate_pair(pr.first, pr.second);
                if (pr.first != 0.0) rebuilt.push_back({rs, pr.first});
                if (pr.second != 0.0) rebuilt.push_back({rs + 1, pr.second});
            }
            std::sort(rebuilt.begin(), rebuilt.end(),
                      [](const Entry& a, const Entry& b) { return a.col < b.col; });
            row = std::move(rebuilt);
        }
    }

    // Presolve: drop zero rows and exact duplicates; contradictions yield an
    // immediate infeasibility certificate.
    auto make_infeasible = [&](const Vec& y_full) {
        cn.decided = true;
        cn.early.status = SolveStatus::PrimalInfeasible;
        cn.early.y.assign(y_full.data(), y_full.data() + y_full.size());
        cn.early.x.assign(static_cast<size_t>(cn.n), 0.0);
        cn.early.z.assign(static_cast<size_t>(cn.n), 0.0);
    };
    std::map<std::string, int> seen;  // canonical row text -> original index
    for (int i = 0; i < cn.orig_rows; ++i) {
        std::vector<Entry> row = rows[static_cast<size_t>(i)];
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
        row.erase(std::remove_if(row.begin(), row.end(), [](const Entry& e) { return e.val == 0.0; }),
                  row.end());
        double bi = prog.rhs[static_cast<size_t>(i)];
        if (row.empty()) {
            if (bi == 0.0) continue;  // vacuous
            Vec y = Vec::Zero(cn.orig_rows);
            y[i] = -1.0 / bi;  // A'y = 0, b'y = -1
            make_infeasible(y);
            return cn;
        }
        std::string key;
        char buf[48];
        for (const Entry& e : row) {
            std::snprintf(buf, sizeof(buf), "%d:%.17g;", e.col, e.val);
            key += buf;
        }
        auto it = seen.find(key);
        if (it != seen.end()) {
            double bj = prog.rhs[static_cast<size_t>(it->second)];
            if (bi == bj) continue;  // duplicate, drop
            Vec y = Vec::Zero(cn.orig_rows);
            double scale = -1.0 / (bi - bj);
            y[i] = scale;
            y[it->second] = -scale;
            make_infeasible(y);
            return cn;
        }
        seen.emplace(std::move(key), i);
        cn.kept_rows.push_back(i);
        cn.arows.push_back(std::move(row));
    }
    cn.p = static_cast<int>(cn.arows.size());
    cn.b = Vec::Zero(cn.p);
    for (int k = 0; k < cn.p; ++k) cn.b[k] = prog.rhs[static_cast<size_t>(cn.kept_rows[static_cast<size_t>(k)])];
    return cn;
}

// ---------------------------------------------------------------------------
// Cone algebra over the canonical layout (nonneg coords, then soc blocks).

struct ConeOps {
    const Canonical* cn;

    Vec identity() const {
        Vec e = Vec::Zero(cone_dim(*cn));
        for (int i = 0; i < cn->num_nonneg; ++i) e[i] = 1.0;
        for (const SocBlock& sb : cn->socs) e[sb.start] = 1.0;
        return e;
    }

    /// Largest t with u + t*d inside the cone; kInf when unbounded.
    double max_step(const Vec& u, const Vec& d) const {
        double alpha = kInf;
        for (int i = 0; i < cn->num_nonneg; ++i)
            if (d[i] < 0.0) alpha = std::min(alpha, -u[i] / d[i]);
        for (const SocBlock& sb : cn->socs) {
            const auto uh = u.segment(sb.start + 1, sb.dim - 1);
            const auto dh = d.segment(sb.start + 1, sb.dim - 1);
            double u0 = u[sb.start], d0 = d[sb.start];
            double a = d0 * d0 - dh.squaredNorm();
            double bq = 2.0 * (u0 * d0 - uh.dot(dh));
            double cq = u0 * u0 - uh.squaredNorm();
            if (cq < 0.0) cq = 0.0;
            double root = kInf;
            if (a == 0.0) {
                if (bq < 0.0) root = -cq / bq;
            } else {
                double disc = bq * bq - 4.0 * a * cq;
                if (disc >= 0.0) {
                    double sq = std::sqrt(disc);
                    double qq = -0.5 * (bq + (bq >= 0.0 ? sq : -sq));
                    double r1 = (a != 0.0) ? qq / a : kInf;
                    double r2 = (qq != 0.0) ? cq / qq : kInf;
                    if (r1 > r2) std::swap(r1, r2);
                    if (r1 > 0.0) root = r1;
                    else if (r2 > 0.0 && a < 0.0) root = r2;
                    else if (r2 > 0.0 && r1 <= 0.0 && bq < 0.0) root = r2;
                } else if (a < 0.0) {
                    root = 0.0;  // should not happen from an interior point
                }
            }
            alpha = std::min(alpha, root);
        }
        return alpha;
    }

    double inner(const Vec& s, const Vec& z) const { return s.dot(z); }

    /// Jordan product u o v.
    Vec jordan_prod(const Vec& u, const Vec& v) const {
        Vec out = Vec::Zero(cone_dim(*cn));
        for (int i = 0; i < cn->num_nonneg; ++i) out[i] = u[i] * v[i];
        for (const SocBlock& sb : cn->socs) {
            const auto uh = u.segment(sb.start + 1, sb.dim - 1);
            const auto vh = v.segment(sb.start + 1, sb.dim - 1);
            out[sb.start] = u[sb.start] * v[sb.start] + uh.dot(vh);
            out.segment(sb.start + 1, sb.dim - 1) = u[sb.start] * vh + v[sb.start] * uh;
        }
        return out;
    }

    /// Solves lambda o q = d for q.
    Vec jordan_div(const Vec& lambda, const Vec& d) const {
        Vec q = Vec::Zero(cone_dim(*cn));
        for (int i = 0; i < cn->num_nonneg; ++i) q[i] = d[i] / lambda[i];
        for (const SocBlock& sb : cn->socs) {
            const auto lh = lambda.segment(sb.start + 1, sb.dim - 1);
            const auto dh = d.segment(sb.start + 1, sb.dim - 1);
            double l0 = lambda[sb.start];
            double jl = l0 * l0 - lh.squaredNorm();
            double q0 = (l0 * d[sb.start] - lh.dot(dh)) / jl;
            q[sb.start] = q0;
            q.segment(sb.start + 1, sb.dim - 1) = (dh - q0 * lh) / l0;
        }
        return q;
    }
};

/// Nesterov-Todd scaling: W z = W^{-1} s = lambda for the current (s, z).
struct Scaling {
    const Canonical* cn;
    Vec w_nonneg;                 // sqrt(s/z) per nonneg coordinate
    std::vector<double> eta;      // per soc block
    std::vector<Vec> wpt;         // unit scaling point per soc block
    Vec lambda;

    static void h_apply(const Vec& w, const Eigen::Ref<const Vec>& u, Eigen::Ref<Vec> out) {
        int d = static_cast<int>(w.size());
        const auto wh = w.segment(1, d - 1);
        const auto uh = u.segment(1, d - 1);
        double dot = wh.dot(uh);
        out[0] = w[0] * u[0] + dot;
        out.segment(1, d - 1) = uh + (u[0] + dot / (1.0 + w[0])) * wh;
    }

    bool compute(const Vec& s, const Vec& z) {
        const Canonical& c = *cn;
        w_nonneg = Vec::Zero(cone_dim(c));
        lambda = Vec::Zero(cone_dim(c));
        eta.assign(c.socs.size(), 1.0);
        wpt.assign(c.socs.size(), Vec());
        for (int i = 0; i < c.num_nonneg; ++i) {
            if (s[i] <= 0.0 || z[i] <= 0.0) return false;
            w_nonneg[i] = std::sqrt(s[i] / z[i]);
            lambda[i] = std::sqrt(s[i] * z[i]);
        }
        for (size_t k = 0; k < c.socs.size(); ++k) {
            const SocBlock& sb = c.socs[k];
            const auto sh = s.segment(sb.start + 1, sb.dim - 1);
            const auto zh = z.segment(sb.start + 1, sb.dim - 1);
            double js = s[sb.start] * s[sb.start] - sh.squaredNorm();
            double jz = z[sb.start] * z[sb.start] - zh.squaredNorm();
            if (js <= 0.0 || jz <= 0.0 || s[sb.start] <= 0.0 || z[sb.start] <= 0.0) return false;
            double as = std::sqrt(js), az = std::sqrt(jz);
            double gamma2 = 0.5 * (1.0 + (s[sb.start] * z[sb.start] - sh.dot(zh)) / (as * az));
            if (gamma2 <= 0.0) return false;
            double gamma = std::sqrt(gamma2);
            Vec w = Vec::Zero(sb.dim);
            w[0] = (s[sb.start] / as + z[sb.start] / az) / (2.0 * gamma);
            w.segment(1, sb.dim - 1) = (sh / as - zh / az) / (2.0 * gamma);
            eta[k] = std::sqrt(as / az);
            wpt[k] = w;
            // lambda = eta * H(w) z on this block
            Vec lam(sb.dim);
            h_apply(w, z.segment(sb.start, sb.dim), lam);
            lambda.segment(sb.start, sb.dim) = eta[k] * lam;
        }
        return true;
    }

    /// W u (symmetric).
    Vec apply(const Vec& u) const {
        const Canonical& c = *cn;
        Vec out = Vec::Zero(cone_dim(c));
        for (int i = 0; i < c.num_nonneg; ++i) out[i] = w_nonneg[i] * u[i];
        for (size_t k = 0; k < c.socs.size(); ++k) {
            const SocBlock& sb = c.socs[k];
            Vec tmp(sb.dim);
            h_apply(wpt[k], u.segment(sb.start, sb.dim), tmp);
            out.segment(sb.start, sb.dim) = eta[k] * tmp;
        }
        return out;
    }

    /// W^{-1} u = eta^{-1} H(Jw) u; J flips the tail sign, and
    /// H(Jw) u = J H(w) (J u).
    Vec apply_inv(const Vec& u) const {
        const Canonical& c = *cn;
        Vec out = Vec::Zero(cone_dim(c));
        for (int i = 0; i < c.num_nonneg; ++i) out[i] = u[i] / w_nonneg[i];
        for (size_t k = 0; k < c.socs.size(); ++k) {
            const SocBlock& sb = c.socs[k];
            Vec ju = u.segment(sb.start, sb.dim);
            ju.segment(1, sb.dim - 1) *= -1.0;
            Vec tmp(sb.dim);
            h_apply(wpt[k], ju, tmp);
            tmp.segment(1, sb.dim - 1) *= -1.0;
            out.segment(sb.start, sb.dim) = tmp / eta[k];
        }
        return out;
    }

    /// Theta = (W'W)^{-1} contribution blocks for the KKT matrix.
    /// Nonneg coordinate: z/s. Soc block: eta^{-2} H(Jw)^2.
    Eigen::MatrixXd theta_block(size_t k) const {
        const SocBlock& sb = cn->socs[k];
        const Vec& w = wpt[k];
        const auto wh = w.segment(1, sb.dim - 1);
        Eigen::MatrixXd m(sb.dim, sb.dim);
        m(0, 0) = w[0] * w[0] + wh.squaredNorm();
        m.block(0, 1, 1, sb.dim - 1) = -2.0 * w[0] * wh.transpose();
        m.block(1, 0, sb.dim - 1, 1) = -2.0 * w[0] * wh;
        m.block(1, 1, sb.dim - 1, sb.dim - 1) =
            Eigen::MatrixXd::Identity(sb.dim - 1, sb.dim - 1) + 2.0 * wh * wh.transpose();
        return m / (eta[k] * eta[k]);
    }

    double theta_nonneg(int i) const { return 1.0 / (w_nonneg[i] * w_nonneg[i]); }
};

// ---------------------------------------------------------------------------

struct KktSolver {
    const Canonical* cn;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    SpMat kmat;  // regularized
    bool analyzed = false;

    bool factor(const Scaling& scal) {
        const Canonical& c = *cn;
        const int dim = c.n + c.p;
        std::vector<Triplet> trips;
        trips.reserve(static_cast<size_t>(dim) * 4);
        for (int j = 0; j < c.n; ++j) trips.emplace_back(j, j, kStaticReg);
        for (int i = 0; i < c.num_nonneg; ++i) {
            int j = c.coord_var[static_cast<size_t>(i)];
            trips.emplace_back(j, j, scal.theta_nonneg(i));
        }
        for (size_t k = 0; k < c.socs.size(); ++k) {
            const SocBlock& sb = c.socs[k];
            Eigen::MatrixXd th = scal.theta_block(k);
            for (int a = 0; a < sb.dim; ++a)
                for (int bcol = 0; bcol < sb.dim; ++bcol)
                    trips.emplace_back(c.coord_var[static_cast<size_t>(sb.start + a)],
                                       c.coord_var[static_cast<size_t>(sb.start + bcol)], th(a, bcol));
        }
        for (int i = 0; i < c.p; ++i) {
            for (const Entry& e : c.arows[static_cast<size_t>(i)]) {
                trips.emplace_back(c.n + i, e.col, e.val);
                trips.emplace_back(e.col, c.n + i, e.val);
            }
            trips.emplace_back(c.n + i, c.n + i, -kStaticReg);
        }
        kmat = SpMat(dim, dim);
        kmat.setFromTriplets(trips.begin(), trips.end());
        if (!analyzed) {
            ldlt.analyzePattern(kmat);
            analyzed = true;
        }
        ldlt.factorize(kmat);
        return ldlt.info() == Eigen::Success;
    }

    /// Solves the reduced system with iterative refinement against the
    /// unregularized matrix.
    Vec solve(const Vec& rhs) const {
        Vec sol = ldlt.solve(rhs);
        for (int pass = 0; pass < 2; ++pass) {
            Vec resid = rhs - kmat * sol;
            resid.head(cn->n) += kStaticReg * sol.head(cn->n);
            resid.tail(cn->p) -= kStaticReg * sol.tail(cn->p);
            sol += ldlt.solve(resid);
        }
        return sol;
    }
};

struct Residuals {
    Vec rx, ry, rz;
    double rt = 0.0;
};

struct Iterate {
    Vec x, y, z, s;
    double tau = 1.0, kappa = 1.0;
};

Vec mat_vec(const Canonical& c, const Vec& x) {
    Vec out = Vec::Zero(c.p);
    for (int i = 0; i < c.p; ++i) {
        double acc = 0.0;
        for (const Entry& e : c.arows[static_cast<size_t>(i)]) acc += e.val * x[e.col];
        out[i] = acc;
    }
    return out;
}

Vec mat_tvec(const Canonical& c, const Vec& y) {
    Vec out = Vec::Zero(c.n);
    for (int i = 0; i < c.p; ++i)
        for (const Entry& e : c.arows[static_cast<size_t>(i)]) out[e.col] += e.val * y[i];
    return out;
}

Vec gather(const Canonical& c, const Vec& x) {
    Vec out(cone_dim(c));
    for (int r = 0; r < cone_dim(c); ++r) out[r] = x[c.coord_var[static_cast<size_t>(r)]];
    return out;
}

void scatter_add(const Canonical& c, const Vec& u, Vec& out, double sign) {
    for (int r = 0; r < cone_dim(c); ++r) out[c.coord_var[static_cast<size_t>(r)]] += sign * u[r];
}

Residuals residuals(const Canonical& c, const Iterate& it) {
    Residuals r;
    r.rx = mat_tvec(c, it.y) + c.c * it.tau;
    scatter_add(c, it.z, r.rx, -1.0);  // G'z with G = -Sel
    r.ry = mat_vec(c, it.x) - c.b * it.tau;
    r.rz = it.s - gather(c, it.x);
    r.rt = it.kappa + c.c.dot(it.x) + c.b.dot(it.y);
    return r;
}

struct Direction {
    Vec dx, dy, dz, ds;
    double dtau = 0.0, dkappa = 0.0;
};

/// Solves the three-field system
///   A'dy + G'dz = bx,  A dx = by,  G dx - W'W dz = bz
/// through the scaled normal-equations reduction.
void solve3(const Canonical& c, const KktSolver& kkt, const Scaling& scal, const Vec& bx,
            const Vec& by, const Vec& bz, Vec& dx, Vec& dy, Vec& dz) {
    Vec rhs(c.n + c.p);
    Vec top = bx;
    // bx - Sel'(Theta bz): Theta u computed blockwise via W^{-1}(W^{-1} u).
    Vec theta_bz = scal.apply_inv(scal.apply_inv(bz));
    scatter_add(c, theta_bz, top, -1.0);
    rhs.head(c.n) = top;
    rhs.tail(c.p) = by;
    Vec sol = kkt.solve(rhs);
    dx = sol.head(c.n);
    dy = sol.tail(c.p);
    dz = -scal.apply_inv(scal.apply_inv(gather(c, dx) + bz));
}

}  // namespace

ConicSolution solve(const StandardFormProgram& program, const SolverSettings& settings) {
    program.validate();
    Canonical cn = canonicalize(program);
    ConicSolution out;
    if (cn.decided) {
        cn.early.iterations = 0;
        return cn.early;
    }

    const int m = cone_dim(cn);
    const double bnorm = cn.b.size() ? cn.b.norm() : 0.0;
    const double cnorm = cn.c.norm();
    ConeOps cone{&cn};
    Scaling scal;
    scal.cn = &cn;
    KktSolver kkt;
    kkt.cn = &cn;

    Iterate it;
    it.x = Vec::Zero(cn.n);
    it.y = Vec::Zero(cn.p);
    it.s = cone.identity();
    it.z = cone.identity();
    it.tau = 1.0;
    it.kappa = 1.0;

    const double nu = static_cast<double>(cone_degree(cn));
    auto mu_of = [&](const Iterate& cur) {
        return (cone.inner(cur.s, cur.z) + cur.tau * cur.kappa) / (nu + 1.0);
    };

    auto finish_scaled = [&](SolveStatus status, const Iterate& cur, int iters) {
        ConicSolution sol;
        sol.status = status;
        sol.iterations = iters;
        double tau = cur.tau > 0 ? cur.tau : 1.0;
        Vec x = cur.x / tau;
        Vec y = cur.y / tau;
        Vec zfull = Vec::Zero(cn.n);
        {
            Vec ztmp = cur.z / tau;
            scatter_add(cn, ztmp, zfull, 1.0);
        }
        // Undo the rotated-cone substitution on primal and dual values.
        for (int rs : cn.rotated_starts) {
            rotate_pair(x[rs], x[rs + 1]);
            rotate_pair(zfull[rs], zfull[rs + 1]);
        }
        sol.x.assign(x.data(), x.data() + x.size());
        sol.z.assign(zfull.data(), zfull.data() + zfull.size());
        sol.y.assign(static_cast<size_t>(cn.orig_rows), 0.0);
        for (int k = 0; k < cn.p; ++k) sol.y[static_cast<size_t>(cn.kept_rows[static_cast<size_t>(k)])] = y[k];
        double pobj = 0.0;
        for (int j = 0; j < cn.n; ++j) pobj += program.c[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
        sol.objective = pobj + program.obj_constant;
        return sol;
    };

    double mu0 = mu_of(it);
    int iter = 0;
    for (; iter < settings.max_iter; ++iter) {
        Residuals res = residuals(cn, it);
        double tau = it.tau;
        double pcost = cn.c.dot(it.x) / tau;
        double dcost = -cn.b.dot(it.y) / tau;
        double gap_abs = std::fabs(pcost - dcost);
        double rel_gap = gap_abs / (1.0 + std::fabs(pcost));
        double pres = std::max(res.ry.norm() / (1.0 + bnorm), res.rz.norm() / 1.0) / tau;
        double dres = res.rx.norm() / (1.0 + cnorm) / tau;
        assert(pcost - dcost >= -1e-6 * (1.0 + std::fabs(pcost) + std::fabs(dcost)));

        if (settings.verbose)
            std::printf("it %2d  pcost %+.6e dcost %+.6e gap %.2e pres %.2e dres %.2e tau %.2e kap %.2e\n",
                        iter, pcost, dcost, rel_gap, pres, dres, it.tau, it.kappa);

        if (pres <= settings.feas_tol && dres <= settings.feas_tol && rel_gap <= settings.gap_tol) {
            ConicSolution sol = finish_scaled(SolveStatus::Optimal, it, iter);
            sol.primal_residual = pres;
            sol.dual_residual = dres;
            sol.rel_gap = rel_gap;
            return sol;
        }

        // Infeasibility / unboundedness certificates.
        double by = cn.b.dot(it.y);
        if (by < 0.0) {
            Vec atyz = mat_tvec(cn, it.y);
            scatter_add(cn, it.z, atyz, -1.0);
            double cert = atyz.norm() / (1.0 + cnorm) / (-by);
            if (cert <= settings.feas_tol) {
                Iterate norm = it;
                norm.y /= -by;
                norm.z /= -by;
                norm.tau = 1.0;
                norm.x.setZero();
                ConicSolution sol = finish_scaled(SolveStatus::PrimalInfeasible, norm, iter);
                sol.objective = std::numeric_limits<double>::quiet_NaN();
                return sol;
            }
        }
        double cx = cn.c.dot(it.x);
        if (cx < 0.0) {
            double ray_res = std::max(mat_vec(cn, it.x).norm() / (1.0 + bnorm),
                                      (gather(cn, it.x) - it.s).norm());
            if (ray_res / (-cx) <= settings.feas_tol) {
                Iterate norm = it;
                norm.x /= -cx;
                norm.s /= -cx;
                norm.tau = 1.0;
                norm.y.setZero();
                norm.z.setZero();
                ConicSolution sol = finish_scaled(SolveStatus::DualInfeasible, norm, iter);
                sol.objective = -kInf;
                return sol;
            }
        }

        if (!scal.compute(it.s, it.z)) break;
        if (!kkt.factor(scal)) break;

        double mu = mu_of(it);
        if (mu < 1e-14 * std::max(1.0, mu0)) break;

        // Static direction for the tau elimination.
        Vec x1, y1, z1;
        solve3(cn, kkt, scal, -cn.c, cn.b, Vec::Zero(m), x1, y1, z1);
        double denom_static = cn.c.dot(x1) + cn.b.dot(y1) - it.kappa / it.tau;
        if (denom_static == 0.0) break;

        auto direction = [&](double gamma1, const Vec& ds_target, double dk_target) {
            Direction d;
            Vec v1 = cone.jordan_div(scal.lambda, ds_target);
            Vec bz = -gamma1 * res.rz - scal.apply(v1);
            Vec dx0, dy0, dz0;
            solve3(cn, kkt, scal, -gamma1 * res.rx, -gamma1 * res.ry, bz, dx0, dy0, dz0);
            double num = -gamma1 * res.rt - dk_target / it.tau - cn.c.dot(dx0) - cn.b.dot(dy0);
            d.dtau = num / denom_static;
            d.dx = dx0 + d.dtau * x1;
            d.dy = dy0 + d.dtau * y1;
            d.dz = dz0 + d.dtau * z1;
            d.ds = scal.apply(v1 - scal.apply(d.dz));
            d.dkappa = (dk_target - it.kappa * d.dtau) / it.tau;
            return d;
        };

        // Predictor.
        Vec lam_sq = cone.jordan_prod(scal.lambda, scal.lambda);
        Direction aff = direction(1.0, -lam_sq, -it.tau * it.kappa);
        double alpha_aff = std::min({cone.max_step(it.s, aff.ds), cone.max_step(it.z, aff.dz),
                                     aff.dtau < 0 ? -it.tau / aff.dtau : kInf,
                                     aff.dkappa < 0 ? -it.kappa / aff.dkappa : kInf});
        alpha_aff = std::min(alpha_aff, 1.0);
        double sigma = std::pow(1.0 - alpha_aff, 3);
        sigma = std::min(1.0, std::max(0.0, sigma));

        // Corrector (Mehrotra) in the scaled space.
        Vec corr = cone.jordan_prod(scal.apply_inv(aff.ds), scal.apply(aff.dz));
        Vec ds_target = sigma * mu * cone.identity() - lam_sq - corr;
        double dk_target = sigma * mu - it.tau * it.kappa - aff.dtau * aff.dkappa;
        Direction dir = direction(1.0 - sigma, ds_target, dk_target);

        double alpha = std::min({cone.max_step(it.s, dir.ds), cone.max_step(it.z, dir.dz),
                                 dir.dtau < 0 ? -it.tau / dir.dtau : kInf,
                                 dir.dkappa < 0 ? -it.kappa / dir.dkappa : kInf});
        alpha = std::min(1.0, kStepFrac * alpha);
        if (alpha < 1e-11) break;

        it.x += alpha * dir.dx;
        it.y += alpha * dir.dy;
        it.z += alpha * dir.dz;
        it.s += alpha * dir.ds;
        it.tau += alpha * dir.dtau;
        it.kappa += alpha * dir.dkappa;
        if (it.tau <= 0.0 || it.kappa < 0.0) break;
    }

    // No certified outcome within the iteration budget.
    ConicSolution sol = finish_scaled(SolveStatus::NumericalLimit, it, iter);
    Residuals res = residuals(cn, it);
    double tau = it.tau;
    double pcost = cn.c.dot(it.x) / tau;
    double dcost = -cn.b.dot(it.y) / tau;
    sol.primal_residual = std::max(res.ry.norm() / (1.0 + bnorm), res.rz.norm()) / tau;
    sol.dual_residual = res.rx.norm() / (1.0 + cnorm) / tau;
    sol.rel_gap = std::fabs(pcost - dcost) / (1.0 + std::fabs(pcost));
    return sol;
}

}  // namespace radopf

#include "gamefit/lp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gamefit/error.hpp"

namespace gamefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw InputError(std::string("LP: non-finite entries in ") + what);
}

// Internal form: min c.x  s.t.  G x <= h, E x = f, x free. Variable bounds
// are folded into G; rows are scaled to unit inf-norm. The first
// `num_orig_ineq` rows of G correspond 1:1 to surviving original
// inequality rows (zero rows are resolved up front).
struct NormalizedLP {
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    Eigen::MatrixXd E;
    Eigen::VectorXd f;
    bool trivially_infeasible = false;
};

NormalizedLP normalize(const StandardLP& lp, double tol) {
    const int n = lp.num_vars();
    require_finite(lp.objective, "objective");
    require_finite(lp.ineq_matrix, "inequality matrix");
    require_finite(lp.ineq_bounds, "inequality bounds");
    require_finite(lp.eq_matrix, "equality matrix");
    require_finite(lp.eq_values, "equality values");
    if (lp.ineq_matrix.rows() != lp.ineq_bounds.size() ||
        (lp.ineq_matrix.rows() > 0 && lp.ineq_matrix.cols() != n) ||
        lp.eq_matrix.rows() != lp.eq_values.size() ||
        (lp.eq_matrix.rows() > 0 && lp.eq_matrix.cols() != n) ||
        (!lp.var_bounds.empty() && static_cast<int>(lp.var_bounds.size()) != n)) {
        throw InputError("LP: inconsistent dimensions");
    }

    NormalizedLP out;
    out.c = lp.objective;

    std::vector<Eigen::VectorXd> grows;
    std::vector<double> gb;
    for (Eigen::Index i = 0; i < lp.ineq_matrix.rows(); ++i) {
        Eigen::VectorXd row = lp.ineq_matrix.row(i).transpose();
        double scale = row.lpNorm<Eigen::Infinity>();
        if (scale <= tol) {
            if (lp.ineq_bounds(i) < -tol) out.trivially_infeasible = true;
            continue;
        }
        grows.push_back(row / scale);
        gb.push_back(lp.ineq_bounds(i) / scale);
    }
    for (std::size_t j = 0; j < lp.var_bounds.size(); ++j) {
        const auto& vb = lp.var_bounds[j];
        if (std::isnan(vb.lower) || std::isnan(vb.upper)) throw InputError("LP: NaN variable bound");
        if (vb.lower > vb.upper) out.trivially_infeasible = true;
        if (vb.upper < kInf) {
            Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
            row(static_cast<Eigen::Index>(j)) = 1.0;
            grows.push_back(row);
            gb.push_back(vb.upper);
        }
        if (vb.lower > -kInf) {
            Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
            row(static_cast<Eigen::Index>(j)) = -1.0;
            grows.push_back(row);
            gb.push_back(-vb.lower);
        }
    }
    out.G.resize(static_cast<Eigen::Index>(grows.size()), n);
    out.h.resize(static_cast<Eigen::Index>(grows.size()));
    for (std::size_t i = 0; i < grows.size(); ++i) {
        out.G.row(static_cast<Eigen::Index>(i)) = grows[i].transpose();
        out.h(static_cast<Eigen::Index>(i)) = gb[i];
    }

    std::vector<Eigen::VectorXd> erows;
    std::vector<double> ev;
    for (Eigen::Index i = 0; i < lp.eq_matrix.rows(); ++i) {
        Eigen::VectorXd row = lp.eq_matrix.row(i).transpose();
        double scale = row.lpNorm<Eigen::Infinity>();
        if (scale <= tol) {
            if (std::abs(lp.eq_values(i)) > tol) out.trivially_infeasible = true;
            continue;
        }
        erows.push_back(row / scale);
        ev.push_back(lp.eq_values(i) / scale);
    }
    out.E.resize(static_cast<Eigen::Index>(erows.size()), n);
    out.f.resize(static_cast<Eigen::Index>(erows.size()));
    for (std::size_t i = 0; i < erows.size(); ++i) {
        out.E.row(static_cast<Eigen::Index>(i)) = erows[i].transpose();
        out.f(static_cast<Eigen::Index>(i)) = ev[i];
    }
    return out;
}

enum class TabStatus { Optimal, Infeasible, Unbounded };

// min q.y s.t. M y = r, y >= 0, solved by a two-phase primal simplex with
// Bland's rule (lowest-index entering column; exact ratio ties broken by
// lowest basis variable index). Also returns the row multipliers pi of the
// optimal basis, with pi = 0 on rows dropped as linearly dependent.
struct TableauResult {
    TabStatus status = TabStatus::Infeasible;
    Eigen::VectorXd y;
    double objective = 0;
    Eigen::VectorXd row_multipliers;
};

TableauResult simplex_standard(Eigen::MatrixXd M, Eigen::VectorXd r, const Eigen::VectorXd& q,
                               const SimplexOptions& opt) {
    const int nr = static_cast<int>(M.rows());
    const int nc = static_cast<int>(M.cols());
    TableauResult res;
    res.row_multipliers = Eigen::VectorXd::Zero(nr);
    res.y = Eigen::VectorXd::Zero(nc);

    if (nr == 0) {
        for (int j = 0; j < nc; ++j) {
            if (q(j) < -opt.reduced_cost_tol) {
                res.status = TabStatus::Unbounded;
                return res;
            }
        }
        res.status = TabStatus::Optimal;
        res.objective = 0;
        return res;
    }

    Eigen::VectorXd flip = Eigen::VectorXd::Ones(nr);
    for (int i = 0; i < nr; ++i) {
        if (r(i) < 0) {
            M.row(i) = -M.row(i);
            r(i) = -r(i);
            flip(i) = -1;
        }
    }
    const Eigen::MatrixXd M_flipped = M;  // kept for multiplier recovery

    // Tableau [M | I_artificial | rhs]; wrow/zrow carry reduced costs plus
    // the negated objective in the last slot.
    const int total = nc + nr;
    Eigen::MatrixXd T(nr, total + 1);
    T.leftCols(nc) = M;
    T.block(0, nc, nr, nr) = Eigen::MatrixXd::Identity(nr, nr);
    T.col(total) = r;

    Eigen::RowVectorXd wrow = Eigen::RowVectorXd::Zero(total + 1);
    for (int j = 0; j < total + 1; ++j) {
        if (j >= nc && j < total) continue;  // artificial costs start at 1, reduced to 0 below
        wrow(j) = -T.col(j).sum();
    }
    Eigen::RowVectorXd zrow = Eigen::RowVectorXd::Zero(total + 1);
    zrow.head(nc) = q.transpose();

    std::vector<int> basis(nr);
    std::vector<char> row_active(nr, 1);
    std::vector<char> col_allowed(total, 1);
    for (int i = 0; i < nr; ++i) basis[i] = nc + i;

    long pivots = 0;
    auto pivot = [&](int pr, int pc) {
        T.row(pr) /= T(pr, pc);
        for (int i = 0; i < nr; ++i) {
            if (i != pr && T(i, pc) != 0.0) T.row(i) -= T(i, pc) * T.row(pr);
        }
        if (wrow(pc) != 0.0) wrow -= wrow(pc) * T.row(pr);
        if (zrow(pc) != 0.0) zrow -= zrow(pc) * T.row(pr);
        basis[pr] = pc;
        if (++pivots > opt.max_pivots) throw InternalError("simplex: pivot limit exceeded");
    };

    // Bland ratio test over active rows. Returns -1 when the column is
    // unbounded (no positive pivot entry).
    auto leaving_row = [&](int pc) {
        int best = -1;
        double best_ratio = 0;
        for (int i = 0; i < nr; ++i) {
            if (!row_active[i]) continue;
            if (T(i, pc) <= opt.feasibility_tol) continue;
            double ratio = T(i, total) / T(i, pc);
            if (best < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[best])) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    };

    auto run_phase = [&](const Eigen::RowVectorXd& cost, bool allow_artificials) -> TabStatus {
        for (;;) {
            int entering = -1;
            for (int j = 0; j < total; ++j) {
                if (!col_allowed[j]) continue;
                if (!allow_artificials && j >= nc) continue;
                if (cost(j) < -opt.reduced_cost_tol) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) return TabStatus::Optimal;
            int leave = leaving_row(entering);
            if (leave < 0) return TabStatus::Unbounded;
            if (basis[leave] >= nc) col_allowed[basis[leave]] = 0;  // artificials never re-enter
            pivot(leave, entering);
        }
    };

    // Phase 1.
    if (run_phase(wrow, true) == TabStatus::Unbounded)
        throw InternalError("simplex: phase-1 unbounded");
    if (-wrow(total) > opt.feasibility_tol) {
        res.status = TabStatus::Infeasible;
        return res;
    }
    // Drive remaining artificial basics out; rows that cannot pivot are
    // linearly dependent and get dropped.
    for (int i = 0; i < nr; ++i) {
        if (basis[i] < nc) continue;
        int pc = -1;
        for (int j = 0; j < nc; ++j) {
            if (std::abs(T(i, j)) > opt.feasibility_tol) {
                pc = j;
                break;
            }
        }
        if (pc >= 0) {
            col_allowed[basis[i]] = 0;
            pivot(i, pc);
        } else {
            row_active[i] = 0;
        }
    }

    // Phase 2.
    TabStatus st = run_phase(zrow, false);
    if (st == TabStatus::Unbounded) {
        res.status = TabStatus::Unbounded;
        return res;
    }

    for (int i = 0; i < nr; ++i) {
        if (row_active[i] && basis[i] < nc) res.y(basis[i]) = T(i, total);
    }
    res.objective = q.dot(res.y);

    // Multipliers from the optimal basis: (M_B over active rows)^T pi = q_B.
    std::vector<int> rows_used;
    for (int i = 0; i < nr; ++i) {
        if (row_active[i] && basis[i] < nc) rows_used.push_back(i);
    }
    const int k = static_cast<int>(rows_used.size());
    if (k > 0) {
        Eigen::MatrixXd B(k, k);
        Eigen::VectorXd qb(k);
        for (int a = 0; a < k; ++a) {
            qb(a) = q(basis[rows_used[a]]);
            for (int b = 0; b < k; ++b) B(b, a) = M_flipped(rows_used[b], basis[rows_used[a]]);
        }
        Eigen::VectorXd pi = Eigen::FullPivLU<Eigen::MatrixXd>(B.transpose()).solve(qb);
        for (int a = 0; a < k; ++a) res.row_multipliers(rows_used[a]) = flip(rows_used[a]) * pi(a);
    }
    res.status = TabStatus::Optimal;
    return res;
}

// Dual of min c.x s.t. G x <= h, E x = f (x free):
//   min h.lambda + f.(nu+ - nu-)  s.t.  G^T lambda + E^T (nu+ - nu-) = -c,
//   all variables >= 0.
struct DualProblem {
    Eigen::MatrixXd M;
    Eigen::VectorXd r;
    Eigen::VectorXd q;
};

DualProblem build_dual(const NormalizedLP& p) {
    const int n = static_cast<int>(p.c.size());
    const int mg = static_cast<int>(p.G.rows());
    const int me = static_cast<int>(p.E.rows());
    DualProblem d;
    d.M.resize(n, mg + 2 * me);
    d.q.resize(mg + 2 * me);
    if (mg > 0) {
        d.M.leftCols(mg) = p.G.transpose();
        d.q.head(mg) = p.h;
    }
    if (me > 0) {
        d.M.block(0, mg, n, me) = p.E.transpose();
        d.M.rightCols(me) = -p.E.transpose();
        d.q.segment(mg, me) = p.f;
        d.q.tail(me) = -p.f;
    }
    d.r = -p.c;
    return d;
}

double primal_violation(const NormalizedLP& p, const Eigen::VectorXd& x) {
    double v = 0;
    if (p.G.rows() > 0) v = std::max(v, (p.G * x - p.h).maxCoeff());
    if (p.E.rows() > 0) v = std::max(v, (p.E * x - p.f).cwiseAbs().maxCoeff());
    return v;
}

// Feasibility of {G x <= h, E x = f} via the always-feasible helper
//   min tau  s.t.  G x - tau <= h, E x - tau <= f, -E x - tau <= -f, tau >= -1,
// whose optimum is <= 0 exactly when the system has a point.
bool feasible_impl(const Eigen::MatrixXd& G, const Eigen::VectorXd& h, const Eigen::MatrixXd& E,
                   const Eigen::VectorXd& f, const SimplexOptions& opt, Eigen::VectorXd* witness) {
    const int n = static_cast<int>(std::max(G.cols(), E.cols()));
    const int mg = static_cast<int>(G.rows());
    const int me = static_cast<int>(E.rows());
    if (mg + me == 0) {
        if (witness) *witness = Eigen::VectorXd::Zero(n);
        return true;
    }
    StandardLP helper;
    const int rows = mg + 2 * me + 1;
    helper.objective = Eigen::VectorXd::Zero(n + 1);
    helper.objective(n) = 1.0;
    helper.ineq_matrix = Eigen::MatrixXd::Zero(rows, n + 1);
    helper.ineq_bounds = Eigen::VectorXd::Zero(rows);
    if (mg > 0) {
        helper.ineq_matrix.topLeftCorner(mg, n) = G;
        helper.ineq_bounds.head(mg) = h;
    }
    if (me > 0) {
        helper.ineq_matrix.block(mg, 0, me, n) = E;
        helper.ineq_bounds.segment(mg, me) = f;
        helper.ineq_matrix.block(mg + me, 0, me, n) = -E;
        helper.ineq_bounds.segment(mg + me, me) = -f;
    }
    helper.ineq_matrix.col(n).head(rows - 1).setConstant(-1.0);
    helper.ineq_matrix(rows - 1, n) = -1.0;
    helper.ineq_bounds(rows - 1) = 1.0;

    NormalizedLP norm = normalize(helper, opt.feasibility_tol);
    if (norm.trivially_infeasible) return false;  // a zero row with negative bound
    DualProblem dual = build_dual(norm);
    TableauResult t = simplex_standard(dual.M, dual.r, dual.q, opt);
    if (t.status != TabStatus::Optimal)
        throw InternalError("feasibility helper LP did not solve to optimality");
    double tau = t.row_multipliers(n);
    bool ok = tau <= opt.feasibility_tol;
    if (ok && witness) *witness = t.row_multipliers.head(n);
    return ok;
}

}  // namespace

LpSolution solve_lp(const StandardLP& lp, const SimplexOptions& options) {
    const double tol = options.feasibility_tol;
    NormalizedLP p = normalize(lp, tol);
    LpSolution sol;
    if (p.trivially_infeasible) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }
    const int n = lp.num_vars();

    DualProblem dual = build_dual(p);
    TableauResult t = simplex_standard(dual.M, dual.r, dual.q, options);

    if (t.status == TabStatus::Unbounded) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }
    if (t.status == TabStatus::Infeasible) {
        // Dual infeasibility leaves two primal possibilities; a feasibility
        // probe on the bound-folded system settles it.
        bool feas = feasible_impl(p.G, p.h, p.E, p.f, options, nullptr);
        sol.status = feas ? LpStatus::Unbounded : LpStatus::Infeasible;
        return sol;
    }

    Eigen::VectorXd x = t.row_multipliers;
    double scaled_tol = tol * 100.0 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if (primal_violation(p, x) > scaled_tol) {
        // Degenerate-basis fallback: rebuild the point from complementary
        // slackness (rows with strictly positive duals are tight).
        std::vector<Eigen::VectorXd> rows;
        std::vector<double> rhs;
        for (Eigen::Index i = 0; i < p.E.rows(); ++i) {
            rows.push_back(p.E.row(i).transpose());
            rhs.push_back(p.f(i));
        }
        for (Eigen::Index i = 0; i < p.G.rows(); ++i) {
            if (t.y(i) > tol) {
                rows.push_back(p.G.row(i).transpose());
                rhs.push_back(p.h(i));
            }
        }
        if (!rows.empty()) {
            Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), n);
            Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
                b(static_cast<Eigen::Index>(i)) = rhs[i];
            }
            x = A.completeOrthogonalDecomposition().solve(b);
        }
        if (primal_violation(p, x) > scaled_tol)
            throw InternalError("solve_lp: primal recovery failed verification");
    }

    sol.status = LpStatus::Optimal;
    sol.x = x;
    sol.objective_value = lp.objective.dot(x);
    for (Eigen::Index i = 0; i < lp.ineq_matrix.rows(); ++i) {
        double slack = lp.ineq_bounds(i) - lp.ineq_matrix.row(i).dot(x);
        double rscale = std::max(1.0, std::abs(lp.ineq_bounds(i)));
        if (std::abs(slack) <= 100.0 * tol * rscale) sol.active_set.push_back(static_cast<int>(i));
    }
    return sol;
}

bool check_feasible(const Eigen::MatrixXd& ineq, const Eigen::VectorXd& bounds,
                    const Eigen::MatrixXd& eq, const Eigen::VectorXd& values,
                    const SimplexOptions& options, Eigen::VectorXd* witness) {
    require_finite(ineq, "inequality matrix");
    require_finite(bounds, "inequality bounds");
    require_finite(eq, "equality matrix");
    require_finite(values, "equality values");
    return feasible_impl(ineq, bounds, eq, values, options, witness);
}

bool check_feasible(const Eigen::MatrixXd& ineq, const Eigen::VectorXd& bounds,
                    const SimplexOptions& options, Eigen::VectorXd* witness) {
    Eigen::MatrixXd eq(0, ineq.cols());
    Eigen::VectorXd values(0);
    return check_feasible(ineq, bounds, eq, values, options, witness);
}

std::string dump_lp(const StandardLP& lp) {
    std::string out;
    char buf[64];
    auto append_vec = [&](const Eigen::VectorXd& v) {
        for (Eigen::Index j = 0; j < v.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", v(j));
            if (j > 0) out += ' ';
            out += buf;
        }
    };
    out += "minimize\n  ";
    append_vec(lp.objective);
    out += "\nsubject to\n";
    for (Eigen::Index i = 0; i < lp.ineq_matrix.rows(); ++i) {
        out += "  ";
        append_vec(lp.ineq_matrix.row(i).transpose());
        std::snprintf(buf, sizeof buf, " <= %.17g\n", lp.ineq_bounds(i));
        out += buf;
    }
    for (Eigen::Index i = 0; i < lp.eq_matrix.rows(); ++i) {
        out += "  ";
        append_vec(lp.eq_matrix.row(i).transpose());
        std::snprintf(buf, sizeof buf, " == %.17g\n", lp.eq_values(i));
        out += buf;
    }
    if (!lp.var_bounds.empty()) {
        out += "bounds\n";
        for (std::size_t j = 0; j < lp.var_bounds.size(); ++j) {
            std::snprintf(buf, sizeof buf, "  %.17g <= x%zu <= %.17g\n", lp.var_bounds[j].lower, j,
                          lp.var_bounds[j].upper);
            out += buf;
        }
    }
    return out;
}

}  // namespace gamefit

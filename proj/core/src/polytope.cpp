#include "gamefit/polytope.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gamefit/error.hpp"
#include "gamefit/lp.hpp"

namespace gamefit {

namespace {

struct WorkingVertex {
    Eigen::VectorXd y;
    std::vector<int> active;  // tight rows among those processed so far
};

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
}

// rank(common tight rows) == k-1 is the edge test; exact also for
// degenerate vertices because active sets are recomputed, not inherited.
bool adjacent(const WorkingVertex& u, const WorkingVertex& w,
              const std::vector<Eigen::VectorXd>& rows, int k, double tol) {
    std::vector<int> common;
    std::set_intersection(u.active.begin(), u.active.end(), w.active.begin(), w.active.end(),
                          std::back_inserter(common));
    if (static_cast<int>(common.size()) < k - 1) return false;
    Eigen::MatrixXd C(static_cast<Eigen::Index>(common.size()), k);
    for (std::size_t i = 0; i < common.size(); ++i)
        C.row(static_cast<Eigen::Index>(i)) = rows[static_cast<std::size_t>(common[i])].transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C);
    qr.setThreshold(tol);
    return qr.rank() == k - 1;
}

std::vector<int> tight_rows(const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& rows,
                            const std::vector<double>& offs, int upto, double tol) {
    std::vector<int> act;
    for (int i = 0; i < upto; ++i) {
        if (std::abs(rows[static_cast<std::size_t>(i)].dot(y) - offs[static_cast<std::size_t>(i)]) <= tol)
            act.push_back(i);
    }
    return act;
}

}  // namespace

VertexEnumeration enumerate_polytope_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                              const PolytopeOptions& opts) {
    Eigen::MatrixXd E(0, A.cols());
    Eigen::VectorXd f(0);
    return enumerate_polytope_vertices(A, b, E, f, opts);
}

VertexEnumeration enumerate_polytope_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                              const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                                              const PolytopeOptions& opts) {
    const int dim = static_cast<int>(std::max(A.cols(), E.cols()));
    if (dim == 0) throw InputError("enumerate_polytope_vertices: zero-dimensional input");
    if (dim > opts.max_dim)
        throw InputError("enumerate_polytope_vertices: dimension exceeds enumeration guard");
    if (A.rows() != b.size() || E.rows() != f.size())
        throw InputError("enumerate_polytope_vertices: inconsistent rows");

    VertexEnumeration out;
    if (!check_feasible(A, b, E, f)) {
        out.feasible = false;
        out.bounded = true;
        return out;
    }

    // Affine reduction: theta = theta0 + Z y with Z an orthonormal kernel
    // basis of E.
    Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(dim, dim);
    int k = dim;
    if (E.rows() > 0) {
        theta0 = E.completeOrthogonalDecomposition().solve(f);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
        lu.setThreshold(opts.tol);
        Eigen::MatrixXd kernel = lu.kernel();
        k = (lu.rank() == dim) ? 0 : static_cast<int>(kernel.cols());
        if (k == 0) {
            out.bounded = true;
            out.vertices.push_back(theta0);
            return out;
        }
        Z = Eigen::HouseholderQR<Eigen::MatrixXd>(kernel).householderQ() *
            Eigen::MatrixXd::Identity(dim, k);
    }

    // Reduced, row-normalized inequality system.
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> offs;
    std::vector<Eigen::VectorXd> data_rows;
    std::vector<double> data_offs;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        Eigen::VectorXd a = Z.transpose() * A.row(i).transpose();
        double beta = b(i) - A.row(i).dot(theta0);
        double scale = a.lpNorm<Eigen::Infinity>();
        if (scale <= opts.tol) continue;  // row is constant on the subspace; feasibility already checked
        data_rows.push_back(a / scale);
        data_offs.push_back(beta / scale);
    }

    if (data_rows.empty()) {
        out.bounded = false;  // whole affine subspace of dimension k >= 1
        return out;
    }

    // Bounding box via LPs in the reduced space.
    Eigen::MatrixXd Ared(static_cast<Eigen::Index>(data_rows.size()), k);
    Eigen::VectorXd bred(static_cast<Eigen::Index>(data_rows.size()));
    for (std::size_t i = 0; i < data_rows.size(); ++i) {
        Ared.row(static_cast<Eigen::Index>(i)) = data_rows[i].transpose();
        bred(static_cast<Eigen::Index>(i)) = data_offs[i];
    }
    Eigen::VectorXd lo(k), hi(k);
    for (int j = 0; j < k; ++j) {
        for (int sign : {+1, -1}) {
            StandardLP lp;
            lp.objective = Eigen::VectorXd::Zero(k);
            lp.objective(j) = sign;
            lp.ineq_matrix = Ared;
            lp.ineq_bounds = bred;
            lp.eq_matrix.resize(0, k);
            lp.eq_values.resize(0);
            LpSolution s = solve_lp(lp);
            if (s.status == LpStatus::Unbounded) {
                out.bounded = false;
                return out;
            }
            if (s.status != LpStatus::Optimal)
                throw InternalError("vertex enumeration: bounding LP failed");
            if (sign > 0)
                lo(j) = s.objective_value;
            else
                hi(j) = -s.objective_value;
        }
    }
    out.bounded = true;

    const double box_scale = 1.0 + std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff());
    const double ctol = opts.tol * 100.0 * box_scale;

    // Inflated box seeds the incremental insertion; the polyhedron is
    // strictly inside, so box rows never survive into final active sets.
    for (int j = 0; j < k; ++j) {
        double delta = 1.0 + 0.1 * (hi(j) - lo(j));
        Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
        r(j) = 1.0;
        rows.push_back(r);
        offs.push_back(hi(j) + delta);
        rows.push_back(-r);
        offs.push_back(-(lo(j) - delta));
    }

    std::vector<WorkingVertex> verts;
    for (int mask = 0; mask < (1 << k); ++mask) {
        WorkingVertex v;
        v.y.resize(k);
        for (int j = 0; j < k; ++j) {
            bool upper = (mask >> j) & 1;
            v.y(j) = upper ? offs[static_cast<std::size_t>(2 * j)]
                           : -offs[static_cast<std::size_t>(2 * j + 1)];
            v.active.push_back(upper ? 2 * j : 2 * j + 1);
        }
        verts.push_back(std::move(v));
    }

    for (std::size_t ri = 0; ri < data_rows.size(); ++ri) {
        const Eigen::VectorXd& a = data_rows[ri];
        const double beta = data_offs[ri];
        const int row_index = static_cast<int>(rows.size());
        rows.push_back(a);
        offs.push_back(beta);

        std::vector<double> s(verts.size());
        bool any_pos = false;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            s[v] = a.dot(verts[v].y) - beta;
            if (s[v] > ctol) any_pos = true;
        }
        if (!any_pos) {
            for (std::size_t v = 0; v < verts.size(); ++v) {
                if (std::abs(s[v]) <= ctol) verts[v].active.push_back(row_index);
            }
            continue;
        }

        std::vector<WorkingVertex> next;
        std::vector<std::size_t> neg, pos;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            if (s[v] > ctol) {
                pos.push_back(v);
            } else {
                if (std::abs(s[v]) <= ctol) verts[v].active.push_back(row_index);
                neg.push_back(v);
                next.push_back(verts[v]);
            }
        }
        if (next.empty()) throw InternalError("vertex enumeration: cut removed every vertex");

        for (std::size_t ui : neg) {
            if (std::abs(s[ui]) <= ctol) continue;  // already on the new row
            for (std::size_t wi : pos) {
                if (!adjacent(verts[ui], verts[wi], rows, k, opts.tol)) continue;
                double t = s[ui] / (s[ui] - s[wi]);
                WorkingVertex nv;
                nv.y = verts[ui].y + t * (verts[wi].y - verts[ui].y);
                nv.active = tight_rows(nv.y, rows, offs, row_index + 1, ctol);
                bool dup = false;
                for (const auto& existing : next) {
                    if ((existing.y - nv.y).lpNorm<Eigen::Infinity>() <= ctol) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) next.push_back(std::move(nv));
            }
        }
        verts = std::move(next);
    }

    // Map back, drop anything still leaning on the artificial box, dedupe,
    // and order deterministically.
    std::vector<Eigen::VectorXd> finals;
    for (const auto& v : verts) {
        bool on_box = false;
        for (int idx : v.active) {
            if (idx < 2 * k) {
                on_box = true;
                break;
            }
        }
        if (on_box) throw InternalError("vertex enumeration: vertex touches the inflated box");
        Eigen::VectorXd theta = theta0 + Z * v.y;
        bool dup = false;
        for (const auto& existing : finals) {
            if ((existing - theta).lpNorm<Eigen::Infinity>() <= ctol) {
                dup = true;
                break;
            }
        }
        if (!dup) finals.push_back(std::move(theta));
    }
    std::sort(finals.begin(), finals.end(), lex_less);
    out.vertices = std::move(finals);
    return out;
}

}  // namespace gamefit

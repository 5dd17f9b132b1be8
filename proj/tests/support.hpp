#pragma once

// Shared test helpers: seeded generators and the independent brute-force
// oracles the property tests check the implementation against.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "gamefit/dataset.hpp"
#include "gamefit/features.hpp"
#include "gamefit/forward.hpp"

namespace gamefit::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1p-53);
    }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Eigen::VectorXd vector(int dim, double lo, double hi) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 rng_;
};

// Exhaustive dim-subset vertex enumeration: every subset of `dim` rows
// (equalities always included) with full rank yields a candidate point,
// kept when it satisfies all constraints. Exact but exponential; the
// production path is checked against this on small instances.
inline std::vector<Eigen::VectorXd> brute_force_vertices(const Eigen::MatrixXd& A,
                                                         const Eigen::VectorXd& b,
                                                         const Eigen::MatrixXd& E,
                                                         const Eigen::VectorXd& f,
                                                         double tol = 1e-7) {
    const int dim = static_cast<int>(A.cols());
    const int me = static_cast<int>(E.rows());
    const int need = dim - me;
    std::vector<Eigen::VectorXd> vertices;
    if (need < 0) return vertices;

    std::vector<int> subset(static_cast<std::size_t>(need));
    const int m = static_cast<int>(A.rows());

    auto try_subset = [&]() {
        Eigen::MatrixXd M(dim, dim);
        Eigen::VectorXd rhs(dim);
        for (int i = 0; i < me; ++i) {
            M.row(i) = E.row(i);
            rhs(i) = f(i);
        }
        for (int i = 0; i < need; ++i) {
            M.row(me + i) = A.row(subset[static_cast<std::size_t>(i)]);
            rhs(me + i) = b(subset[static_cast<std::size_t>(i)]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        lu.setThreshold(1e-9);
        if (lu.rank() != dim) return;
        Eigen::VectorXd x = lu.solve(rhs);
        if ((M * x - rhs).lpNorm<Eigen::Infinity>() > tol) return;
        for (int i = 0; i < m; ++i) {
            if (A.row(i).dot(x) > b(i) + tol) return;
        }
        for (const auto& existing : vertices) {
            if ((existing - x).lpNorm<Eigen::Infinity>() <= 1e-6) return;
        }
        vertices.push_back(x);
    };

    // iterate over all subsets of size `need`
    std::vector<bool> mask(static_cast<std::size_t>(m), false);
    std::fill(mask.begin(), mask.begin() + need, true);
    if (need == 0) {
        try_subset();
    } else if (need <= m) {
        do {
            int k = 0;
            for (int i = 0; i < m; ++i) {
                if (mask[static_cast<std::size_t>(i)]) subset[static_cast<std::size_t>(k++)] = i;
            }
            try_subset();
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    std::sort(vertices.begin(), vertices.end(), [](const auto& u, const auto& v) {
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (u(i) != v(i)) return u(i) < v(i);
        }
        return false;
    });
    return vertices;
}

// Dense-grid minimization of the irrationality loss over a box intersected
// with extra inequality rows. Returns the best value found.
inline double grid_min_loss(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& space_rows,
                            const Eigen::VectorXd& space_bounds, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi, int steps_per_dim) {
    const int dim = static_cast<int>(lo.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    Eigen::VectorXd theta(dim);
    for (;;) {
        for (int d = 0; d < dim; ++d) {
            theta(d) = lo(d) + (hi(d) - lo(d)) * idx[static_cast<std::size_t>(d)] /
                                   (steps_per_dim - 1);
        }
        bool ok = true;
        for (Eigen::Index i = 0; i < space_rows.rows() && ok; ++i) {
            if (space_rows.row(i).dot(theta) > space_bounds(i) + 1e-12) ok = false;
        }
        if (ok) {
            double loss = rows.rows() > 0 ? std::max(0.0, (rows * theta).maxCoeff()) : 0.0;
            best = std::min(best, loss);
        }
        int d = 0;
        while (d < dim && ++idx[static_cast<std::size_t>(d)] == steps_per_dim) {
            idx[static_cast<std::size_t>(d)] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    return best;
}

// Independent quadratic-revenue evaluator for the price-competition checks
// (kept apart from the feature-map machinery on purpose).
inline double quadratic_revenue(const Eigen::Vector4d& theta, int firm, double p1, double p2,
                                double xi) {
    const double own = firm == 0 ? p1 : p2;
    return own * (theta(0) + theta(1) * p1 + theta(2) * p2 + theta(3) * xi);
}

// Synthetic advertising data: uniform expenditures, shares evolved by a
// hidden Lanchester model plus bounded noise.
inline TrajectoryData random_advertising_data(std::uint64_t seed, int steps) {
    Rng rng(seed);
    const double k1 = rng.uniform(0.02, 0.12);
    const double k2 = rng.uniform(0.02, 0.12);
    TrajectoryData data;
    data.state.emplace();
    double share = rng.uniform(0.3, 0.7);
    double a1 = rng.uniform(0.5, 6.0);
    double a2 = rng.uniform(0.5, 6.0);
    for (int t = 0; t < steps; ++t) {
        data.times.push_back(t);
        Action x1(1), x2(1);
        x1(0) = a1;
        x2(0) = a2;
        data.profiles.push_back(ActionProfile{{x1, x2}});
        data.state->push_back(share);
        a1 = rng.uniform(0.5, 6.0);
        a2 = rng.uniform(0.5, 6.0);
        MarketShareModel model(MarketShareKind::Lanchester, k1, k2);
        share = market_share_step(model, share, a1, a2);
        share = std::clamp(share + rng.uniform(-0.02, 0.02), 0.01, 0.99);
    }
    return data;
}

}  // namespace gamefit::testing

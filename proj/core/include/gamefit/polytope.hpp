#pragma once

#include <Eigen/Core>
#include <vector>

namespace gamefit {

struct PolytopeOptions {
    double tol = 1e-9;
    int max_dim = 6;  // enumeration guard
};

struct VertexEnumeration {
    bool feasible = true;
    bool bounded = false;
    std::vector<Eigen::VectorXd> vertices;  // empty when unbounded or infeasible
};

/// All vertices of {x : A x <= b, E x = f}, deduplicated and sorted
/// lexicographically. Boundedness is decided first by per-coordinate LPs;
/// an unbounded polyhedron yields bounded=false with no vertex list rather
/// than a silent truncation. Equalities are removed by affine reduction,
/// then halfspaces are inserted incrementally into a bounding box
/// (double-description style), which stays tractable at tens of thousands
/// of rows where enumerating dim-subsets of rows would not.
VertexEnumeration enumerate_polytope_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                              const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                                              const PolytopeOptions& opts = {});

VertexEnumeration enumerate_polytope_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                              const PolytopeOptions& opts = {});

}  // namespace gamefit

#pragma once

#include <Eigen/Dense>

namespace swallowtail {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Only the upper triangle is
/// read after symmetrizing; converges when the off-diagonal norm drops below
/// machine precision relative to the Frobenius norm.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 100);

/// Numerical rank from singular values: sigma > max(rel_tol * sigma_max, abs_floor).
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double abs_floor);

}  // namespace swallowtail

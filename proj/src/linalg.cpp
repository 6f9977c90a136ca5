#include "swallowtail/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace swallowtail {

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, int max_sweeps) {
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  SymmetricEigen out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= eps * frob || frob == 0.0) break;
    out.sweeps = sweep + 1;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J^T A J with J the (p, q) rotation.
        for (Eigen::Index r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double abs_floor) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double threshold = std::max(rel_tol * (sv.size() ? sv(0) : 0.0), abs_floor);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > threshold ? 1 : 0;
  return rank;
}

}  // namespace swallowtail

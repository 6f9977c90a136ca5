#pragma once

// Extended-precision gradient and Hessian of P(b, z). Used only to refine
// critical points where P vanishes to high order and double-precision
// gradients bottom out before the point reaches the locus.

#include <vector>

#include <Eigen/Dense>

#include "swallowtail/charpoly.hpp"

#if defined(SWALLOWTAIL_HAVE_QUADMATH)
extern "C" {
#include <quadmath.h>
}
#endif

namespace swallowtail::detail {

#if defined(SWALLOWTAIL_HAVE_QUADMATH)
using wide = __float128;
inline wide wide_cos(wide x) { return cosq(x); }
inline wide wide_sin(wide x) { return sinq(x); }
#else
using wide = long double;
inline wide wide_cos(wide x) { return std::cos(x); }
inline wide wide_sin(wide x) { return std::sin(x); }
#endif

using WideVec = std::vector<wide>;

class PreciseEvaluator {
 public:
  explicit PreciseEvaluator(const CharPolyFamily& cp);

  /// Gradient in (b_1..b_n, z) at x; the Hessian too when hess is non-null.
  WideVec gradient(const WideVec& x, Eigen::MatrixXd* hess = nullptr) const;

 private:
  struct Term {
    std::vector<int> m;
    wide re;
    wide im;
  };
  std::size_t k_;
  std::size_t n_;
  Backend backend_;
  std::vector<std::vector<Term>> coeffs_;  // a_0..a_{k-1}
};

/// Euclidean norm, reported as double.
double wide_norm(const WideVec& v);

}  // namespace swallowtail::detail

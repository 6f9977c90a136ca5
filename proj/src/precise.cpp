#include "precise.hpp"

#include <cmath>

namespace swallowtail::detail {

namespace {

wide to_wide(const mpq_class& q) {
  // numerators and denominators in the model families are small integers
  return static_cast<wide>(q.get_num().get_d()) / static_cast<wide>(q.get_den().get_d());
}

wide ipow(wide x, int e) {
  wide r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

PreciseEvaluator::PreciseEvaluator(const CharPolyFamily& cp) : k_(cp.k), n_(cp.n), backend_(cp.backend) {
  for (std::size_t j = 0; j < k_; ++j) {
    std::vector<Term> terms;
    for (const auto& [m, c] : cp.coeffs[j].terms()) terms.push_back({m, to_wide(c.real()), to_wide(c.imag())});
    coeffs_.push_back(std::move(terms));
  }
}

WideVec PreciseEvaluator::gradient(const WideVec& x, Eigen::MatrixXd* hess) const {
  const std::size_t dim = n_ + 1;
  const wide z = x[n_];

  // value, gradient and Hessian of each a_j in b
  std::vector<wide> val(k_, 0);
  std::vector<WideVec> grad(k_, WideVec(n_, 0));
  std::vector<WideVec> second(k_, WideVec(n_ * n_, 0));
  for (std::size_t j = 0; j < k_; ++j) {
    for (const Term& t : coeffs_[j]) {
      if (backend_ == Backend::torus) {
        wide theta = 0;
        for (std::size_t i = 0; i < n_; ++i) theta += static_cast<wide>(t.m[i]) * x[i];
        const wide c = wide_cos(theta), s = wide_sin(theta);
        const wide r = t.re * c - t.im * s;
        const wide d = -(t.re * s + t.im * c);
        val[j] += r;
        for (std::size_t i = 0; i < n_; ++i) {
          grad[j][i] += static_cast<wide>(t.m[i]) * d;
          if (!hess) continue;
          for (std::size_t l = 0; l < n_; ++l) second[j][i * n_ + l] -= static_cast<wide>(t.m[i] * t.m[l]) * r;
        }
      } else {
        auto mono = [&](std::size_t skip_a, std::size_t skip_b) {
          // coefficient times the monomial differentiated in axes skip_a then skip_b (n_ = none)
          std::vector<int> e = t.m;
          wide factor = t.re;
          for (std::size_t axis : {skip_a, skip_b}) {
            if (axis >= n_) continue;
            if (e[axis] == 0) return wide(0);
            factor *= static_cast<wide>(e[axis]);
            --e[axis];
          }
          for (std::size_t i = 0; i < n_; ++i) factor *= ipow(x[i], e[i]);
          return factor;
        };
        val[j] += mono(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
          grad[j][i] += mono(i, n_);
          if (!hess) continue;
          for (std::size_t l = 0; l < n_; ++l) second[j][i * n_ + l] += mono(i, l);
        }
      }
    }
  }

  WideVec g(dim, 0);
  g[n_] = static_cast<wide>(k_) * ipow(z, static_cast<int>(k_) - 1);
  for (std::size_t j = 0; j < k_; ++j) {
    const wide zj = ipow(z, static_cast<int>(j));
    for (std::size_t i = 0; i < n_; ++i) g[i] += grad[j][i] * zj;
    if (j >= 1) g[n_] += static_cast<wide>(j) * val[j] * ipow(z, static_cast<int>(j) - 1);
  }
  if (!hess) return g;

  WideVec h(dim * dim, 0);
  wide& zz = h[dim * dim - 1];
  if (k_ >= 2) zz = static_cast<wide>(k_ * (k_ - 1)) * ipow(z, static_cast<int>(k_) - 2);
  for (std::size_t j = 0; j < k_; ++j) {
    const wide zj = ipow(z, static_cast<int>(j));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t l = 0; l < n_; ++l) h[i * dim + l] += second[j][i * n_ + l] * zj;
      if (j >= 1) {
        const wide mixed = static_cast<wide>(j) * grad[j][i] * ipow(z, static_cast<int>(j) - 1);
        h[i * dim + n_] += mixed;
        h[n_ * dim + i] += mixed;
      }
    }
    if (j >= 2) zz += static_cast<wide>(j * (j - 1)) * val[j] * ipow(z, static_cast<int>(j) - 2);
  }
  const auto d = static_cast<Eigen::Index>(dim);
  hess->resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index l = 0; l < d; ++l) (*hess)(i, l) = static_cast<double>(h[static_cast<std::size_t>(i * d + l)]);
  }
  return g;
}

double wide_norm(const WideVec& v) {
  wide s = 0;
  for (const wide& x : v) s += x * x;
  return std::sqrt(static_cast<double>(s));
}

}  // namespace swallowtail::detail

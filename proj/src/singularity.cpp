#include "swallowtail/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace swallowtail {

namespace {

// Coefficients of F high-to-low: 1, 0, l_{k-2}, ..., l_0.
template <class T>
std::vector<T> unfolding_coeffs(std::span<const T> lambda, std::size_t k) {
  if (k < 2) throw std::invalid_argument("discriminant needs k >= 2");
  if (lambda.size() != k - 1) throw std::invalid_argument("unfolding point must have k-1 coordinates");
  std::vector<T> f(k + 1, T(0));
  f[0] = T(1);
  for (std::size_t j = 0; j + 1 < k; ++j) f[k - j] = lambda[j];
  return f;
}

// Sylvester matrix of F (degree k) and F' (degree k-1), size 2k-1.
template <class T>
std::vector<std::vector<T>> sylvester(const std::vector<T>& f) {
  const std::size_t k = f.size() - 1;
  std::vector<T> df(k);
  for (std::size_t i = 0; i < k; ++i) df[i] = f[i] * T(static_cast<long>(k - i));
  const std::size_t size = 2 * k - 1;
  std::vector<std::vector<T>> s(size, std::vector<T>(size, T(0)));
  for (std::size_t r = 0; r + 1 < k; ++r) {
    for (std::size_t c = 0; c <= k; ++c) s[r][r + c] = f[c];
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) s[k - 1 + r][r + c] = df[c];
  }
  return s;
}

double sign_factor(std::size_t k) { return (k * (k - 1) / 2) % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

double discriminant(std::span<const double> lambda, std::size_t k) {
  const auto f = unfolding_coeffs<double>(lambda, k);
  std::vector<std::vector<long double>> a;
  for (const auto& row : sylvester(f)) a.emplace_back(row.begin(), row.end());

  const std::size_t n = a.size();
  long double det = 1.0L;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0L) return 0.0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double factor = a[r][col] / a[col][col];
      if (factor == 0.0L) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return sign_factor(k) * static_cast<double>(det);
}

mpq_class discriminant_exact(std::span<const mpq_class> lambda, std::size_t k) {
  const auto f = unfolding_coeffs<mpq_class>(lambda, k);
  auto a = sylvester(f);
  const std::size_t n = a.size();
  mpq_class det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a[r][col]) == 0) continue;
      const mpq_class factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return sign_factor(k) > 0 ? det : mpq_class(-det);
}

double a3_slice_closed_form(double a0, double a1) {
  const double a0sq = a0 * a0;
  const double a1sq = a1 * a1;
  return 20736.0 * a0 - 4608.0 * a0sq + 256.0 * a0sq * a0 + 864.0 * a1sq - 864.0 * a0 * a1sq - 27.0 * a1sq * a1sq;
}

double discriminant_scale(std::span<const double> roots) {
  double scale = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      const double f = 1.0 + std::abs(roots[i]) + std::abs(roots[j]);
      scale *= f * f;
    }
  }
  return scale;
}

std::string Stratum::label() const {
  if (parts.empty()) return "nonsingular";
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? ",A_" : "A_") + std::to_string(parts[i]);
  }
  return out + ")";
}

std::vector<std::complex<double>> monic_roots(std::span<const double> c) {
  const auto k = static_cast<Eigen::Index>(c.size());
  if (k == 0) return {};
  if (k == 1) return {std::complex<double>(-c[0], 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) companion(i, k - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < k; ++i) roots.push_back(solver.eigenvalues()(i));
  std::sort(roots.begin(), roots.end(), [](auto x, auto y) { return x.real() < y.real(); });
  return roots;
}

namespace {

// Value of F^{(order)}(x) / order! and the matching magnitude reference,
// with F = z^k + sum c_j z^j.
std::pair<double, double> taylor_coeff(std::span<const double> c, double x, std::size_t order) {
  const std::size_t k = c.size();
  double value = 0.0;
  double scale = 0.0;
  for (std::size_t i = order; i <= k; ++i) {
    const double coeff = i == k ? 1.0 : c[i];
    double binom = 1.0;
    for (std::size_t t = 0; t < order; ++t) binom = binom * static_cast<double>(i - t) / static_cast<double>(t + 1);
    const double term = coeff * binom * std::pow(x, static_cast<double>(i - order));
    value += term;
    scale += std::abs(term);
  }
  return {value, scale};
}

std::vector<std::vector<std::size_t>> link_sorted(const std::vector<double>& values, double radius) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (groups.empty() || values[i] - values[groups.back().back()] > radius) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

StratumResult from_groups(const std::vector<double>& values, const std::vector<std::vector<std::size_t>>& groups) {
  StratumResult out;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (std::size_t idx : g) mean += values[idx];
    mean /= static_cast<double>(g.size());
    out.clusters.push_back({mean, static_cast<int>(g.size())});
    if (g.size() >= 2) out.stratum.parts.push_back(static_cast<int>(g.size()) - 1);
  }
  std::sort(out.stratum.parts.begin(), out.stratum.parts.end());
  return out;
}

}  // namespace

std::vector<double> real_roots(std::span<const double> c, double tol) {
  const auto roots = monic_roots(c);
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, 1.0 + std::abs(r));
  std::vector<double> out;
  for (const auto& r : roots) {
    // Perturbed multiple roots come out as conjugate pairs with small
    // imaginary parts; sqrt(tol) covers splitting up to a triple root.
    if (std::abs(r.imag()) > std::sqrt(tol) * scale) {
      throw std::domain_error("polynomial has a non-real root " + std::to_string(r.real()) + "+" +
                              std::to_string(r.imag()) + "i");
    }
    double x = r.real();
    for (int it = 0; it < 4; ++it) {
      const auto [f, fs] = taylor_coeff(c, x, 0);
      const auto [df, dfs] = taylor_coeff(c, x, 1);
      if (df == 0.0 || std::abs(df) < 1e-6 * dfs) break;  // multiple root: leave as is
      const double next = x - f / df;
      if (std::abs(taylor_coeff(c, next, 0).first) >= std::abs(f)) break;
      x = next;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Single linkage on complex distance; groups ordered by mean real part.
std::vector<std::vector<std::size_t>> link_complex(const std::vector<std::complex<double>>& roots,
                                                   const std::vector<std::size_t>& members, double radius) {
  std::vector<std::size_t> label(members.size());
  std::iota(label.begin(), label.end(), 0);
  auto find = [&](std::size_t x) {
    while (label[x] != x) x = label[x] = label[label[x]];
    return x;
  };
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (std::abs(roots[members[i]] - roots[members[j]]) <= radius) label[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(members.size(), members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::size_t root = find(i);
    if (slot[root] == members.size()) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(members[i]);
  }
  return groups;
}

}  // namespace

StratumResult stratum_of(std::span<const double> lambda, std::size_t k, double tol) {
  const auto f = unfolding_coeffs<double>(lambda, k);
  std::vector<double> c(k);
  for (std::size_t j = 0; j < k; ++j) c[j] = f[k - j];
  const auto roots = monic_roots(c);
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, 1.0 + std::abs(r));

  // Loose grouping first: a root of multiplicity m splits by about eps^{1/m}
  // in the companion eigenvalues. Each loose group is accepted only if the
  // Taylor coefficients of F at its mean vanish up to its size.
  const double loose = std::max(tol, 1e-3) * scale;
  const double tight = tol * scale;
  std::vector<std::size_t> all(roots.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> centers;
  std::vector<std::vector<std::size_t>> groups;
  auto accept = [&](const std::vector<std::size_t>& g) {
    std::complex<double> mean = 0.0;
    for (std::size_t idx : g) mean += roots[idx];
    mean /= static_cast<double>(g.size());
    if (std::abs(mean.imag()) > tight) {
      throw std::domain_error("unfolding point has non-real roots; it lies outside every Hermitian region");
    }
    centers.push_back(mean.real());
    groups.push_back(g);
  };
  for (const auto& g : link_complex(roots, all, loose)) {
    std::complex<double> mean = 0.0;
    for (std::size_t idx : g) mean += roots[idx];
    mean /= static_cast<double>(g.size());
    bool verified = true;
    for (std::size_t order = 0; order < g.size() && verified; ++order) {
      const auto [value, ref] = taylor_coeff(c, mean.real(), order);
      verified = std::abs(value) <= tol * std::max(ref, 1.0);
    }
    if (g.size() == 1 || verified) {
      accept(g);
      continue;
    }
    for (const auto& sg : link_complex(roots, g, tight)) accept(sg);
  }

  StratumResult out;
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return centers[x] < centers[y]; });
  for (std::size_t i : order) {
    out.clusters.push_back({centers[i], static_cast<int>(groups[i].size())});
    if (groups[i].size() >= 2) out.stratum.parts.push_back(static_cast<int>(groups[i].size()) - 1);
  }
  std::sort(out.stratum.parts.begin(), out.stratum.parts.end());
  return out;
}

StratumResult stratum_from_roots(std::vector<double> roots, double tol) {
  std::sort(roots.begin(), roots.end());
  double scale = 1.0;
  for (double r : roots) scale = std::max(scale, 1.0 + std::abs(r));
  return from_groups(roots, link_sorted(roots, tol * scale));
}

bool grothendieck_valid(const Stratum& s, std::size_t k) {
  const long total = std::accumulate(s.parts.begin(), s.parts.end(), 0L);
  return total <= static_cast<long>(k) - static_cast<long>(s.parts.size());
}

}  // namespace swallowtail

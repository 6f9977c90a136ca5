#include "swallowtail/charpoly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace swallowtail {

namespace {

void trim(ZPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

ZPoly zpoly_add(const ZPoly& p, const ZPoly& q, std::size_t n, Backend backend) {
  ZPoly out(std::max(p.size(), q.size()), TrigPoly(n, backend));
  for (std::size_t j = 0; j < p.size(); ++j) out[j] += p[j];
  for (std::size_t j = 0; j < q.size(); ++j) out[j] += q[j];
  trim(out);
  return out;
}

ZPoly zpoly_mul(const ZPoly& p, const ZPoly& q, std::size_t n, Backend backend) {
  if (p.empty() || q.empty()) return {};
  ZPoly out(p.size() + q.size() - 1, TrigPoly(n, backend));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (!q[j].is_zero()) out[i + j] += p[i] * q[j];
    }
  }
  trim(out);
  return out;
}

ZPoly zpoly_negate(ZPoly p) {
  for (auto& c : p) c = -c;
  return p;
}

CharPolyFamily family_from_zpoly(const ZPoly& p, std::size_t k, std::size_t n, Backend backend) {
  CharPolyFamily cp;
  cp.k = k;
  cp.n = n;
  cp.backend = backend;
  cp.shift = TrigPoly(n, backend);
  if (p.size() != k + 1 || !(p[k] == TrigPoly::constant(n, 1, backend))) {
    throw std::logic_error("characteristic polynomial is not monic of degree k");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (!is_real_valued(p[j])) throw std::logic_error("characteristic polynomial coefficient is not real-valued");
    cp.coeffs.push_back(p[j]);
  }
  return cp;
}

}  // namespace

TrigPoly CharPolyFamily::coefficient(std::size_t j) const {
  if (j == k) return TrigPoly::constant(n, 1, backend);
  return coeffs.at(j);
}

CharPolyFamily char_poly(const HamiltonianFamily& h) {
  const std::size_t k = h.k();
  const std::size_t n = h.n();
  const Backend backend = h.backend();
  if (k > kMaxExactDegree) {
    throw std::invalid_argument("char_poly: k = " + std::to_string(k) + " exceeds the exact-expansion limit of " +
                                std::to_string(kMaxExactDegree));
  }
  if (!h.is_hermitian()) throw std::invalid_argument("char_poly: Hamiltonian family is not Hermitian");

  // M = z I - H, entries as polynomials in z.
  std::vector<ZPoly> m(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      ZPoly e{-h(i, j)};
      if (i == j) e.push_back(TrigPoly::constant(n, 1, backend));
      trim(e);
      m[i * k + j] = std::move(e);
    }
  }

  // Laplace expansion along successive rows, memoized on the remaining
  // column set; the row index is k - popcount(columns).
  std::unordered_map<unsigned, ZPoly> memo;
  auto det = [&](auto&& self, unsigned cols) -> ZPoly {
    if (cols == 0) return {TrigPoly::constant(n, 1, backend)};
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    const std::size_t row = k - static_cast<std::size_t>(__builtin_popcount(cols));
    ZPoly total;
    int position = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (!(cols & (1u << c))) continue;
      const ZPoly& entry = m[row * k + c];
      if (!entry.empty()) {
        ZPoly term = zpoly_mul(entry, self(self, cols & ~(1u << c)), n, backend);
        total = zpoly_add(total, position % 2 == 0 ? term : zpoly_negate(term), n, backend);
      }
      ++position;
    }
    memo.emplace(cols, total);
    return total;
  };
  return family_from_zpoly(det(det, (1u << k) - 1), k, n, backend);
}

CharPolyFamily cycle_expansion(const QuotientGraph& g) {
  const std::size_t k = g.k;
  const std::size_t n = g.n;
  if (k > kMaxExactDegree) throw std::invalid_argument("cycle_expansion: k too large");

  // Weights w+ on the simplified graph; loops collected per vertex.
  std::vector<TrigPoly> wplus(k * k, TrigPoly(n));
  std::vector<bool> present(k * k, false);
  std::vector<TrigPoly> loops(k, TrigPoly(n));
  for (const Edge& e : g.edges) {
    Frequency neg(e.m.size());
    std::transform(e.m.begin(), e.m.end(), neg.begin(), [](int x) { return -x; });
    if (e.from == e.to) {
      loops[e.from] += TrigPoly::monomial(e.m) + TrigPoly::monomial(neg);
      continue;
    }
    wplus[e.from * k + e.to] += TrigPoly::monomial(e.m);
    wplus[e.to * k + e.from] += TrigPoly::monomial(neg);
    present[e.from * k + e.to] = present[e.to * k + e.from] = true;
  }

  std::vector<std::size_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  ZPoly total;
  do {
    std::vector<bool> seen(k, false);
    ZPoly product{TrigPoly::constant(n, 1)};
    int transpositions = 0;
    bool vanishes = false;
    for (std::size_t start = 0; start < k && !vanishes; ++start) {
      if (seen[start]) continue;
      std::size_t length = 0;
      TrigPoly cycle_weight = TrigPoly::constant(n, 1);
      std::size_t v = start;
      do {
        seen[v] = true;
        const std::size_t next = sigma[v];
        if (next != v) {
          if (!present[v * k + next]) {
            vanishes = true;
            break;
          }
          cycle_weight = cycle_weight * wplus[v * k + next];
        }
        v = next;
        ++length;
      } while (v != start);
      if (vanishes) break;
      transpositions += static_cast<int>(length) - 1;
      if (length == 1) {
        // w+(c) = -z + loop weights
        product = zpoly_mul(product, ZPoly{loops[start], TrigPoly::constant(n, -1)}, n, Backend::torus);
      } else {
        product = zpoly_mul(product, ZPoly{cycle_weight}, n, Backend::torus);
      }
    }
    if (vanishes) continue;
    const bool negative = (transpositions % 2 == 1) != (k % 2 == 1);  // sign(sigma) * (-1)^k
    total = zpoly_add(total, negative ? zpoly_negate(product) : product, n, Backend::torus);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return family_from_zpoly(total, k, n, Backend::torus);
}

CharPolyFamily traceless_shift(CharPolyFamily cp) {
  const std::size_t k = cp.k;
  const std::size_t n = cp.n;
  cp.shifted.clear();
  if (k == 0) return cp;
  cp.shift = cp.coeffs[k - 1] * GaussianRational(mpq_class(1, static_cast<long>(k)));

  // P(z - s) = sum_j a_j sum_i C(j, i) z^i (-s)^{j-i}
  std::vector<TrigPoly> neg_s_pow{TrigPoly::constant(n, 1, cp.backend)};
  for (std::size_t p = 1; p <= k; ++p) neg_s_pow.push_back(neg_s_pow.back() * (-cp.shift));
  std::vector<TrigPoly> out(k + 1, TrigPoly(n, cp.backend));
  for (std::size_t j = 0; j <= k; ++j) {
    const TrigPoly a = cp.coefficient(j);
    if (a.is_zero()) continue;
    mpz_class binom = 1;
    for (std::size_t i = 0; i <= j; ++i) {
      if (i > 0) binom = binom * static_cast<long>(j - i + 1) / static_cast<long>(i);
      out[i] += a * neg_s_pow[j - i] * GaussianRational(mpq_class(binom));
    }
  }
  if (!out[k - 1].is_zero()) throw std::logic_error("traceless_shift: z^{k-1} coefficient did not cancel");
  cp.shifted.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k - 1));
  cp.is_shifted = true;
  return cp;
}

bool edge_count_identity(const QuotientGraph& g, const CharPolyFamily& cp) {
  const LacingInfo info = simple_laced_no_loops(g);
  if (!info.no_loops || !info.simply_laced || g.k < 2) {
    throw std::invalid_argument("edge_count_identity: graph '" + g.name + "' is not a simply-laced graph without loops");
  }
  const CharPolyFamily shifted = cp.is_shifted ? cp : traceless_shift(cp);
  const long edges = static_cast<long>(info.edge_count);
  return shifted.shifted[g.k - 2] == TrigPoly::constant(g.n, -edges);
}

std::string render(const CharPolyFamily& cp, std::span<const std::string> names, bool shifted) {
  if (shifted && !cp.is_shifted) return render(traceless_shift(cp), names, true);
  std::string out = cp.k == 0 ? "1" : cp.k == 1 ? "z" : "z^" + std::to_string(cp.k);
  for (std::size_t idx = cp.k; idx-- > 0;) {
    const TrigPoly a = shifted ? (idx + 1 < cp.k ? cp.shifted[idx] : TrigPoly(cp.n, cp.backend)) : cp.coeffs[idx];
    if (a.is_zero()) continue;
    const std::string zpart = idx == 0 ? "" : idx == 1 ? "z" : "z^" + std::to_string(idx);
    if (a.is_constant() && a.constant_term().is_real()) {
      const mpq_class c = a.constant_term().real();
      const mpq_class mag = abs(c);
      out += (sgn(c) < 0 ? " - " : " + ") + ((mag == 1 && !zpart.empty()) ? "" : mag.get_str()) + zpart;
    } else {
      out += " + (" + swallowtail::render(a, names) + ")" + zpart;
    }
  }
  return out;
}

nlohmann::json to_json(const CharPolyFamily& cp) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& a : cp.coeffs) coeffs.push_back(to_json(a));
  nlohmann::json j = {{"k", cp.k}, {"n", cp.n}, {"backend", to_string(cp.backend)}, {"coeffs", coeffs}};
  if (cp.is_shifted) {
    nlohmann::json shifted = nlohmann::json::array();
    for (const auto& a : cp.shifted) shifted.push_back(to_json(a));
    j["shifted"] = shifted;
    j["shift"] = to_json(cp.shift);
  }
  return j;
}

ZPoly z_derivative(const ZPoly& p) {
  ZPoly out;
  for (std::size_t j = 1; j < p.size(); ++j) out.push_back(p[j] * GaussianRational(static_cast<long>(j)));
  trim(out);
  return out;
}

ZPoly b_derivative(const ZPoly& p, std::size_t axis) {
  ZPoly out;
  for (const auto& c : p) out.push_back(partial_derivative(c, axis));
  trim(out);
  return out;
}

double evaluate(const ZPoly& p, std::span<const double> b, double z) {
  double acc = 0.0;
  for (std::size_t j = p.size(); j-- > 0;) acc = acc * z + evaluate_real(p[j], b);
  return acc;
}

PolyDerivatives gradient_and_hessian_data(const CharPolyFamily& cp) {
  PolyDerivatives d;
  d.n = cp.n;
  for (std::size_t j = 0; j <= cp.k; ++j) d.value.push_back(cp.coefficient(j));
  trim(d.value);
  auto partial = [&](const ZPoly& p, std::size_t var) { return var < cp.n ? b_derivative(p, var) : z_derivative(p); };
  const std::size_t dim = cp.n + 1;
  for (std::size_t i = 0; i < dim; ++i) d.grad.push_back(partial(d.value, i));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) d.hess.push_back(partial(d.grad[i], j));
  }
  return d;
}

FamilyEvaluator::FamilyEvaluator(const CharPolyFamily& cp) : k_(cp.k), n_(cp.n) {
  for (const auto& a : cp.coeffs) coeffs_.emplace_back(a);
}

std::vector<double> FamilyEvaluator::coefficients(std::span<const double> b) const {
  std::vector<double> a(k_ + 1, 1.0);
  for (std::size_t j = 0; j < k_; ++j) a[j] = coeffs_[j].value(b);
  return a;
}

double FamilyEvaluator::value(std::span<const double> b, double z) const {
  double acc = 1.0;
  for (std::size_t j = k_; j-- > 0;) acc = acc * z + coeffs_[j].value(b);
  return acc;
}

FamilyJet FamilyEvaluator::jet(std::span<const double> b, double z, int order) const {
  const std::size_t n = n_;
  const std::size_t dim = n + 1;
  FamilyJet out;
  out.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  out.hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (order >= 3) out.third.assign(dim * dim * dim, 0.0);

  // zpow[j][r] = d^r/dz^r z^j
  auto zd = [z](std::size_t j, std::size_t r) {
    if (r > j) return 0.0;
    double f = 1.0;
    for (std::size_t t = 0; t < r; ++t) f *= static_cast<double>(j - t);
    return f * std::pow(z, static_cast<double>(j - r));
  };
  auto third = [&](std::size_t i, std::size_t j, std::size_t l) -> double& {
    return out.third[(i * dim + j) * dim + l];
  };

  Jet a;
  for (std::size_t j = 0; j <= k_; ++j) {
    if (j < k_) {
      coeffs_[j].eval(b, std::min(order, 3), a);
    } else {
      a.value = 1.0;
      a.grad.assign(order >= 1 ? n : 0, 0.0);
      a.hess.assign(order >= 2 ? n * n : 0, 0.0);
      a.third.assign(order >= 3 ? n * n * n : 0, 0.0);
    }
    out.value += a.value * zd(j, 0);
    if (order < 1) continue;
    for (std::size_t i = 0; i < n; ++i) out.grad(i) += a.grad[i] * zd(j, 0);
    out.grad(n) += a.value * zd(j, 1);
    if (order < 2) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) out.hess(i, l) += a.hess[i * n + l] * zd(j, 0);
      out.hess(i, n) += a.grad[i] * zd(j, 1);
    }
    out.hess(n, n) += a.value * zd(j, 2);
    if (order < 3) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) third(i, l, m) += a.third[(i * n + l) * n + m] * zd(j, 0);
        third(i, l, n) += a.hess[i * n + l] * zd(j, 1);
      }
      third(i, n, n) += a.grad[i] * zd(j, 2);
    }
    third(n, n, n) += a.value * zd(j, 3);
  }
  if (order >= 2) {
    for (std::size_t i = 0; i < n; ++i) out.hess(n, i) = out.hess(i, n);
  }
  if (order >= 3) {
    // Fill the symmetric tensor from the entries with sorted indices.
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t l = 0; l < dim; ++l) {
          std::array<std::size_t, 3> idx{i, j, l};
          std::sort(idx.begin(), idx.end());
          third(i, j, l) = third(idx[0], idx[1], idx[2]);
        }
      }
    }
  }
  return out;
}

CharacteristicMap::CharacteristicMap(const CharPolyFamily& cp) : k_(cp.k), n_(cp.n) {
  const CharPolyFamily shifted = cp.is_shifted ? cp : traceless_shift(cp);
  symbolic_ = shifted.shifted;
  for (const auto& a : symbolic_) compiled_.emplace_back(a);
}

std::vector<double> CharacteristicMap::operator()(std::span<const double> b) const {
  std::vector<double> xi;
  xi.reserve(compiled_.size());
  for (const auto& c : compiled_) xi.push_back(c.value(b));
  return xi;
}

Eigen::MatrixXd CharacteristicMap::jacobian(std::span<const double> b) const {
  Eigen::MatrixXd j(static_cast<Eigen::Index>(compiled_.size()), static_cast<Eigen::Index>(n_));
  Jet jet;
  for (std::size_t r = 0; r < compiled_.size(); ++r) {
    compiled_[r].eval(b, 1, jet);
    for (std::size_t c = 0; c < n_; ++c) j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = jet.grad[c];
  }
  return j;
}

}  // namespace swallowtail

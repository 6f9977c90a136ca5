#pragma once

// P(b, z) = det(z I - H(b)) as a polynomial in z with TrigPoly coefficients,
// computed exactly, plus the traceless (Tschirnhaus) shift and the
// characteristic map b -> (a^_0(b), ..., a^_{k-2}(b)).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "swallowtail/graph_model.hpp"
#include "swallowtail/trigpoly.hpp"

namespace swallowtail {

/// Polynomial in z with TrigPoly coefficients; index j holds the z^j term.
using ZPoly = std::vector<TrigPoly>;

inline constexpr std::size_t kMaxExactDegree = 8;

struct CharPolyFamily {
  std::size_t k = 0;
  std::size_t n = 0;
  Backend backend = Backend::torus;
  /// a_0 .. a_{k-1}; the leading z^k coefficient is 1.
  std::vector<TrigPoly> coeffs;
  /// a^_0 .. a^_{k-2} after z -> z - a_{k-1}/k; empty before traceless_shift.
  std::vector<TrigPoly> shifted;
  TrigPoly shift;
  bool is_shifted = false;

  /// a_j for 0 <= j <= k (a_k == 1).
  TrigPoly coefficient(std::size_t j) const;
  bool is_traceless() const { return k == 0 || coeffs[k - 1].is_zero(); }
};

CharPolyFamily char_poly(const HamiltonianFamily& h);
CharPolyFamily cycle_expansion(const QuotientGraph& g);
CharPolyFamily traceless_shift(CharPolyFamily cp);

/// For no-loop simply-laced graphs: a^_{k-2} == -|E| exactly.
/// Throws std::invalid_argument when the graph does not qualify.
bool edge_count_identity(const QuotientGraph& g, const CharPolyFamily& cp);

/// "z^4 - 6z^2 + (...)z + (...)"
std::string render(const CharPolyFamily& cp, std::span<const std::string> names, bool shifted = false);
nlohmann::json to_json(const CharPolyFamily& cp);

/// Exact partial derivatives of P in the coordinates (b_1..b_n, z).
struct PolyDerivatives {
  std::size_t n = 0;
  ZPoly value;
  std::vector<ZPoly> grad;  // n + 1
  std::vector<ZPoly> hess;  // (n + 1)^2, row-major

  ZPoly hessian(std::size_t i, std::size_t j) const { return hess[i * (n + 1) + j]; }
};

PolyDerivatives gradient_and_hessian_data(const CharPolyFamily& cp);

ZPoly z_derivative(const ZPoly& p);
ZPoly b_derivative(const ZPoly& p, std::size_t axis);
double evaluate(const ZPoly& p, std::span<const double> b, double z);

/// Jet of P at (b, z) in coordinates (b_1..b_n, z).
struct FamilyJet {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  std::vector<double> third;  // (n+1)^3 when requested
};

/// Floating-point evaluator for P and its derivatives (the numeric side of
/// gradient_and_hessian_data).
class FamilyEvaluator {
 public:
  explicit FamilyEvaluator(const CharPolyFamily& cp);

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }

  double value(std::span<const double> b, double z) const;
  FamilyJet jet(std::span<const double> b, double z, int order) const;
  /// Real coefficients a_0..a_k at b.
  std::vector<double> coefficients(std::span<const double> b) const;

 private:
  std::size_t k_;
  std::size_t n_;
  std::vector<CompiledPoly> coeffs_;  // a_0..a_{k-1}
};

/// b -> (a^_0(b), ..., a^_{k-2}(b)).
class CharacteristicMap {
 public:
  explicit CharacteristicMap(const CharPolyFamily& cp);

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  std::size_t components() const { return compiled_.size(); }
  const std::vector<TrigPoly>& symbolic() const { return symbolic_; }

  std::vector<double> operator()(std::span<const double> b) const;
  /// (k-1) x n Jacobian from analytic derivatives.
  Eigen::MatrixXd jacobian(std::span<const double> b) const;

 private:
  std::size_t k_;
  std::size_t n_;
  std::vector<TrigPoly> symbolic_;
  std::vector<CompiledPoly> compiled_;
};

}  // namespace swallowtail

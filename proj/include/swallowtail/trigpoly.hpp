#pragma once

// Exact sparse Laurent polynomials on the torus T^n, written in characters
// e^{i m.b}, plus an affine backend (ordinary polynomials on R^n) so that
// explicit parameter families reuse the same machinery.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

namespace swallowtail {

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0);

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussianRational conj() const { return {re_, -im_}; }
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& rhs);
  GaussianRational& operator-=(const GaussianRational& rhs);
  GaussianRational& operator*=(const GaussianRational& rhs);
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend GaussianRational operator+(GaussianRational lhs, const GaussianRational& rhs) { return lhs += rhs; }
  friend GaussianRational operator-(GaussianRational lhs, const GaussianRational& rhs) { return lhs -= rhs; }
  friend GaussianRational operator*(GaussianRational lhs, const GaussianRational& rhs) { return lhs *= rhs; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  // "p/q" or "p/q+r/s*i"
  std::string to_string() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

enum class Backend { torus, affine };

std::string to_string(Backend backend);
Backend backend_from_string(const std::string& text);

/// Exponent vector: the m in e^{i m.b} (torus) or in b^m (affine).
using Frequency = std::vector<int>;

class TrigPoly {
 public:
  using TermMap = std::map<Frequency, GaussianRational>;

  explicit TrigPoly(std::size_t dim = 0, Backend backend = Backend::torus);

  static TrigPoly constant(std::size_t dim, const GaussianRational& value,
                           Backend backend = Backend::torus);
  static TrigPoly monomial(Frequency m, const GaussianRational& coeff = 1,
                           Backend backend = Backend::torus);
  /// Affine coordinate b_axis.
  static TrigPoly coordinate(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return dim_; }
  Backend backend() const { return backend_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  GaussianRational constant_term() const;
  GaussianRational coefficient(const Frequency& m) const;

  void add_term(const Frequency& m, const GaussianRational& coeff);

  TrigPoly& operator+=(const TrigPoly& rhs);
  TrigPoly& operator-=(const TrigPoly& rhs);
  TrigPoly& operator*=(const GaussianRational& scalar);
  TrigPoly operator-() const;

  friend TrigPoly operator+(TrigPoly lhs, const TrigPoly& rhs) { return lhs += rhs; }
  friend TrigPoly operator-(TrigPoly lhs, const TrigPoly& rhs) { return lhs -= rhs; }
  friend TrigPoly operator*(const TrigPoly& lhs, const TrigPoly& rhs);
  friend TrigPoly operator*(TrigPoly lhs, const GaussianRational& s) { return lhs *= s; }
  friend TrigPoly operator*(const GaussianRational& s, TrigPoly rhs) { return rhs *= s; }
  friend bool operator==(const TrigPoly& a, const TrigPoly& b);

 private:
  void check_compatible(const TrigPoly& rhs) const;

  std::size_t dim_;
  Backend backend_;
  TermMap terms_;
};

TrigPoly add(const TrigPoly& p, const TrigPoly& q);
TrigPoly mul(const TrigPoly& p, const TrigPoly& q);
TrigPoly pow(const TrigPoly& p, unsigned exponent);

/// Torus: conjugate coefficients and negate frequencies. Affine: conjugate
/// coefficients only (the variables are real).
TrigPoly conjugate(const TrigPoly& p);

bool is_real_valued(const TrigPoly& p);

std::complex<double> evaluate(const TrigPoly& p, std::span<const double> b);

/// Real part of evaluate(); throws std::logic_error if the imaginary part is
/// not negligible, which means the reality invariant is broken.
double evaluate_real(const TrigPoly& p, std::span<const double> b);

TrigPoly partial_derivative(const TrigPoly& p, std::size_t axis);

std::vector<std::string> default_variable_names(std::size_t dim);

/// Cosine/sine form for real-valued torus polys, e.g. "3 - 2cos(a+b)".
std::string render(const TrigPoly& p, std::span<const std::string> names);
std::string render(const TrigPoly& p);

/// Lossless serialization: backend, dim and the term list with rational
/// numerator/denominator strings.
nlohmann::json to_json(const TrigPoly& p);
TrigPoly trigpoly_from_json(const nlohmann::json& j);

/// Derivatives of a scalar function up to third order at one point.
struct Jet {
  double value = 0.0;
  std::vector<double> grad;   // n
  std::vector<double> hess;   // n*n, row-major
  std::vector<double> third;  // n*n*n
};

/// Floating-point evaluator for a real-valued TrigPoly. Conjugate terms are
/// folded into cos/sin pairs, so evaluation never produces an imaginary part.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const TrigPoly& p);

  std::size_t dim() const { return dim_; }
  double value(std::span<const double> b) const;
  /// order in {0,1,2,3}; fills jet fields up to that order.
  void eval(std::span<const double> b, int order, Jet& jet) const;

 private:
  struct Term {
    std::vector<int> m;
    double cos_coeff;  // torus: alpha in alpha*cos + beta*sin; affine: coeff
    double sin_coeff;
  };
  std::size_t dim_ = 0;
  Backend backend_ = Backend::torus;
  std::vector<Term> terms_;
};

}  // namespace swallowtail

#include "swallowtail/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace swallowtail {

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& rhs) {
  mpq_class re = re_ * rhs.re_ - im_ * rhs.im_;
  mpq_class im = re_ * rhs.im_ + im_ * rhs.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::to_string() const {
  if (is_real()) return re_.get_str();
  if (sgn(re_) == 0) return im_.get_str() + "*i";
  std::string im = im_.get_str();
  if (im.front() != '-') im = "+" + im;
  return re_.get_str() + im + "*i";
}

std::string to_string(Backend backend) { return backend == Backend::torus ? "torus" : "affine"; }

Backend backend_from_string(const std::string& text) {
  if (text == "torus") return Backend::torus;
  if (text == "affine") return Backend::affine;
  throw std::invalid_argument("unknown backend '" + text + "'");
}

TrigPoly::TrigPoly(std::size_t dim, Backend backend) : dim_(dim), backend_(backend) {}

TrigPoly TrigPoly::constant(std::size_t dim, const GaussianRational& value, Backend backend) {
  TrigPoly p(dim, backend);
  p.add_term(Frequency(dim, 0), value);
  return p;
}

TrigPoly TrigPoly::monomial(Frequency m, const GaussianRational& coeff, Backend backend) {
  if (backend == Backend::affine) {
    for (int e : m) {
      if (e < 0) throw std::invalid_argument("affine monomials need nonnegative exponents");
    }
  }
  TrigPoly p(m.size(), backend);
  p.add_term(m, coeff);
  return p;
}

TrigPoly TrigPoly::coordinate(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::out_of_range("coordinate axis out of range");
  Frequency m(dim, 0);
  m[axis] = 1;
  return monomial(std::move(m), 1, Backend::affine);
}

bool TrigPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.count(Frequency(dim_, 0)) == 1;
}

GaussianRational TrigPoly::constant_term() const { return coefficient(Frequency(dim_, 0)); }

GaussianRational TrigPoly::coefficient(const Frequency& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? GaussianRational{} : it->second;
}

void TrigPoly::add_term(const Frequency& m, const GaussianRational& coeff) {
  if (m.size() != dim_) throw std::invalid_argument("frequency length does not match dimension");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void TrigPoly::check_compatible(const TrigPoly& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("TrigPoly dimension mismatch");
  if (backend_ != rhs.backend_) throw std::invalid_argument("TrigPoly backend mismatch");
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& rhs) {
  check_compatible(rhs);
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& rhs) {
  check_compatible(rhs);
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

TrigPoly& TrigPoly::operator*=(const GaussianRational& scalar) {
  if (scalar.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

TrigPoly TrigPoly::operator-() const {
  TrigPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

TrigPoly operator*(const TrigPoly& lhs, const TrigPoly& rhs) {
  lhs.check_compatible(rhs);
  TrigPoly out(lhs.dim_, lhs.backend_);
  Frequency m(lhs.dim_);
  for (const auto& [m1, c1] : lhs.terms_) {
    for (const auto& [m2, c2] : rhs.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = m1[i] + m2[i];
      out.add_term(m, c1 * c2);
    }
  }
  return out;
}

bool operator==(const TrigPoly& a, const TrigPoly& b) {
  return a.dim_ == b.dim_ && a.backend_ == b.backend_ && a.terms_ == b.terms_;
}

TrigPoly add(const TrigPoly& p, const TrigPoly& q) { return p + q; }
TrigPoly mul(const TrigPoly& p, const TrigPoly& q) { return p * q; }

TrigPoly pow(const TrigPoly& p, unsigned exponent) {
  TrigPoly out = TrigPoly::constant(p.dim(), 1, p.backend());
  for (unsigned i = 0; i < exponent; ++i) out = out * p;
  return out;
}

TrigPoly conjugate(const TrigPoly& p) {
  TrigPoly out(p.dim(), p.backend());
  for (const auto& [m, c] : p.terms()) {
    if (p.backend() == Backend::torus) {
      Frequency neg(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) neg[i] = -m[i];
      out.add_term(neg, c.conj());
    } else {
      out.add_term(m, c.conj());
    }
  }
  return out;
}

bool is_real_valued(const TrigPoly& p) { return conjugate(p) == p; }

std::complex<double> evaluate(const TrigPoly& p, std::span<const double> b) {
  if (b.size() != p.dim()) throw std::invalid_argument("evaluation point has wrong dimension");
  std::complex<double> sum = 0.0;
  for (const auto& [m, c] : p.terms()) {
    if (p.backend() == Backend::torus) {
      double phase = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) phase += m[i] * b[i];
      sum += c.to_complex() * std::polar(1.0, phase);
    } else {
      double mono = 1.0;
      for (std::size_t i = 0; i < m.size(); ++i) mono *= std::pow(b[i], m[i]);
      sum += c.to_complex() * mono;
    }
  }
  return sum;
}

double evaluate_real(const TrigPoly& p, std::span<const double> b) {
  const std::complex<double> v = evaluate(p, b);
  if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real()))) {
    throw std::logic_error("evaluate_real: imaginary part " + std::to_string(v.imag()) +
                           " is not negligible; polynomial is not real-valued");
  }
  return v.real();
}

TrigPoly partial_derivative(const TrigPoly& p, std::size_t axis) {
  if (axis >= p.dim()) throw std::out_of_range("derivative axis out of range");
  TrigPoly out(p.dim(), p.backend());
  for (const auto& [m, c] : p.terms()) {
    if (m[axis] == 0) continue;
    if (p.backend() == Backend::torus) {
      // d/db e^{i m.b} = i m_axis e^{i m.b}
      out.add_term(m, c * GaussianRational(0, mpq_class(m[axis])));
    } else {
      Frequency lowered = m;
      lowered[axis] -= 1;
      out.add_term(lowered, c * GaussianRational(m[axis]));
    }
  }
  return out;
}

std::vector<std::string> default_variable_names(std::size_t dim) {
  static const char* letters[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim; ++i) {
    names.push_back(i < 8 ? std::string(letters[i]) : "b" + std::to_string(i));
  }
  return names;
}

namespace {

// "a+b", "u-v", "2a-c"
std::string linear_form(const Frequency& m, std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    const int mag = std::abs(m[i]);
    if (m[i] < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    if (mag != 1) out += std::to_string(mag);
    out += names[i];
  }
  return out;
}

std::string monomial_form(const Frequency& m, std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (m[i] != 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

bool first_nonzero_positive(const Frequency& m) {
  for (int e : m) {
    if (e != 0) return e > 0;
  }
  return false;
}

// Appends "coeff*body" with sign handling; body empty means a bare constant.
void append_term(std::string& out, const mpq_class& coeff, const std::string& body) {
  if (sgn(coeff) == 0) return;
  mpq_class mag = abs(coeff);
  std::string text;
  if (body.empty()) {
    text = mag.get_str();
  } else {
    text = (mag == 1 ? "" : mag.get_str()) + body;
  }
  if (out.empty()) {
    out = (sgn(coeff) < 0 ? "-" : "") + text;
  } else {
    out += (sgn(coeff) < 0 ? " - " : " + ") + text;
  }
}

}  // namespace

std::string render(const TrigPoly& p, std::span<const std::string> names) {
  if (names.size() != p.dim()) throw std::invalid_argument("render: wrong number of variable names");
  if (p.is_zero()) return "0";
  std::string out;
  const Frequency zero(p.dim(), 0);

  if (p.backend() == Backend::torus && is_real_valued(p)) {
    append_term(out, p.constant_term().real(), "");
    // fewer variables first, then a before b before c
    std::vector<std::pair<Frequency, GaussianRational>> half;
    for (const auto& [m, c] : p.terms()) {
      if (first_nonzero_positive(m)) half.emplace_back(m, c);
    }
    const auto support = [](const Frequency& m) { return std::count_if(m.begin(), m.end(), [](int e) { return e != 0; }); };
    std::stable_sort(half.begin(), half.end(), [&](const auto& x, const auto& y) {
      const auto sx = support(x.first), sy = support(y.first);
      return sx != sy ? sx < sy : x.first > y.first;
    });
    for (const auto& [m, c] : half) {
      const std::string arg = "(" + linear_form(m, names) + ")";
      append_term(out, 2 * c.real(), "cos" + arg);
      append_term(out, -2 * c.imag(), "sin" + arg);
    }
    return out;
  }

  for (const auto& [m, c] : p.terms()) {
    std::string body;
    if (m != zero) {
      body = p.backend() == Backend::torus ? "e^{i(" + linear_form(m, names) + ")}"
                                           : monomial_form(m, names);
    }
    if (c.is_real()) {
      append_term(out, c.real(), body);
    } else {
      const std::string coeff = "(" + c.to_string() + ")";
      out += (out.empty() ? "" : " + ") + coeff + (body.empty() ? "" : "*" + body);
    }
  }
  return out;
}

std::string render(const TrigPoly& p) { return render(p, default_variable_names(p.dim())); }

nlohmann::json to_json(const TrigPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    terms.push_back({{"m", m}, {"re", c.real().get_str()}, {"im", c.imag().get_str()}});
  }
  return {{"backend", to_string(p.backend())}, {"dim", p.dim()}, {"terms", terms}};
}

TrigPoly trigpoly_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  TrigPoly p(dim, backend_from_string(j.at("backend").get<std::string>()));
  for (const auto& t : j.at("terms")) {
    auto m = t.at("m").get<Frequency>();
    if (p.backend() == Backend::affine) {
      for (int e : m) {
        if (e < 0) throw std::invalid_argument("affine term with negative exponent");
      }
    }
    p.add_term(m, GaussianRational(mpq_class(t.at("re").get<std::string>()),
                                   mpq_class(t.at("im").get<std::string>())));
  }
  return p;
}

CompiledPoly::CompiledPoly(const TrigPoly& p) : dim_(p.dim()), backend_(p.backend()) {
  if (!is_real_valued(p)) throw std::invalid_argument("CompiledPoly needs a real-valued polynomial");
  for (const auto& [m, c] : p.terms()) {
    if (backend_ == Backend::affine) {
      terms_.push_back({m, c.real().get_d(), 0.0});
      continue;
    }
    const bool is_zero = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    if (is_zero) {
      terms_.push_back({m, c.real().get_d(), 0.0});
    } else if (first_nonzero_positive(m)) {
      // c e^{it} + conj(c) e^{-it} = 2Re(c) cos t - 2Im(c) sin t
      terms_.push_back({m, 2.0 * c.real().get_d(), -2.0 * c.imag().get_d()});
    }
  }
}

double CompiledPoly::value(std::span<const double> b) const {
  Jet jet;
  eval(b, 0, jet);
  return jet.value;
}

namespace {

double falling_power(double x, int e, int d) {
  if (d > e) return 0.0;
  double f = 1.0;
  for (int i = 0; i < d; ++i) f *= e - i;
  return f * std::pow(x, e - d);
}

}  // namespace

void CompiledPoly::eval(std::span<const double> b, int order, Jet& jet) const {
  if (b.size() != dim_) throw std::invalid_argument("evaluation point has wrong dimension");
  const std::size_t n = dim_;
  jet.value = 0.0;
  jet.grad.assign(order >= 1 ? n : 0, 0.0);
  jet.hess.assign(order >= 2 ? n * n : 0, 0.0);
  jet.third.assign(order >= 3 ? n * n * n : 0, 0.0);

  if (backend_ == Backend::torus) {
    for (const Term& t : terms_) {
      double phase = 0.0;
      for (std::size_t i = 0; i < n; ++i) phase += t.m[i] * b[i];
      const double cs = std::cos(phase);
      const double sn = std::sin(phase);
      const double d0 = t.cos_coeff * cs + t.sin_coeff * sn;
      const double d1 = -t.cos_coeff * sn + t.sin_coeff * cs;
      const double d2 = -d0;
      const double d3 = -d1;
      jet.value += d0;
      if (order < 1) continue;
      for (std::size_t i = 0; i < n; ++i) {
        if (t.m[i] == 0) continue;
        jet.grad[i] += t.m[i] * d1;
        if (order < 2) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (t.m[j] == 0) continue;
          jet.hess[i * n + j] += t.m[i] * t.m[j] * d2;
          if (order < 3) continue;
          for (std::size_t l = 0; l < n; ++l) {
            jet.third[(i * n + j) * n + l] += t.m[i] * t.m[j] * t.m[l] * d3;
          }
        }
      }
    }
    return;
  }

  // Affine: product of per-variable falling powers.
  std::vector<int> counts(n, 0);
  auto derivative = [&](const Term& t) {
    double v = t.cos_coeff;
    for (std::size_t i = 0; i < n && v != 0.0; ++i) v *= falling_power(b[i], t.m[i], counts[i]);
    return v;
  };
  for (const Term& t : terms_) {
    jet.value += derivative(t);
    if (order < 1) continue;
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[i];
      jet.grad[i] += derivative(t);
      if (order >= 2) {
        for (std::size_t j = 0; j < n; ++j) {
          ++counts[j];
          jet.hess[i * n + j] += derivative(t);
          if (order >= 3) {
            for (std::size_t l = 0; l < n; ++l) {
              ++counts[l];
              jet.third[(i * n + j) * n + l] += derivative(t);
              --counts[l];
            }
          }
          --counts[j];
        }
      }
      --counts[i];
    }
  }
}

}  // namespace swallowtail

#include "swallowtail/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "swallowtail/linalg.hpp"

namespace swallowtail {

std::string Signature::pattern() const {
  return "(" + std::string(static_cast<std::size_t>(minus), '-') + std::string(static_cast<std::size_t>(zero), '0') +
         std::string(static_cast<std::size_t>(plus), '+') + ")";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::dirac:
      return "dirac";
    case Classification::morse_other_signature:
      return "morse-other";
    case Classification::degenerate:
      return "degenerate";
  }
  return "degenerate";
}

Classification classification_from_string(const std::string& text) {
  if (text == "dirac") return Classification::dirac;
  if (text == "morse-other") return Classification::morse_other_signature;
  if (text == "degenerate") return Classification::degenerate;
  throw std::invalid_argument("unknown classification '" + text + "'");
}

Eigen::MatrixXd hessian_at(const Family& family, std::span<const double> b, double z) {
  Eigen::MatrixXd h = family.evaluator().jet(b, z, 2).hess;
  return 0.5 * (h + h.transpose());
}

Signature signature(const Eigen::MatrixXd& m, double rel_tol, double abs_floor) {
  const auto eig = jacobi_eigen(m);
  const double top = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double threshold = std::max(rel_tol * top, abs_floor);
  Signature s;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double mu = eig.values(i);
    if (std::abs(mu) <= threshold) {
      ++s.zero;
    } else if (mu < 0) {
      ++s.minus;
    } else {
      ++s.plus;
    }
  }
  return s;
}

bool is_dirac_signature(const Signature& s) {
  if (s.zero != 0) return false;
  const int n = s.size() - 1;
  return (s.minus == n && s.plus == 1) || (s.minus == 1 && s.plus == n);
}

PointClass classify(const Family& family, std::span<const double> b, double z, const ClassifierOptions& opts) {
  PointClass out;
  out.hessian = hessian_at(family, b, z);
  out.signature = signature(out.hessian, opts.signature_rel_tol, opts.signature_abs_floor);
  const auto n = static_cast<Eigen::Index>(family.n());
  out.tilt_free = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(out.hessian(i, n)) > opts.tilt_tol) out.tilt_free = false;
  }
  if (is_dirac_signature(out.signature)) {
    out.classification = Classification::dirac;
  } else if (out.signature.zero == 0) {
    out.classification = Classification::morse_other_signature;
  } else {
    out.classification = Classification::degenerate;
  }
  out.fiber = family.fiber_stratum(b, opts.cluster_tol);
  if (out.classification == Classification::dirac) {
    const double scale = 1.0 + std::abs(z);
    int hits = 0;
    int a1_at_z = 0;
    for (const auto& c : out.fiber.clusters) {
      if (std::abs(c.value - z) <= 1e-5 * scale) {
        ++hits;
        if (c.multiplicity == 2) ++a1_at_z;
      }
    }
    out.fiber_consistent = hits == 1 && a1_at_z == 1;
  }
  return out;
}

std::vector<double> diagonal_closed_form(double a) {
  constexpr double third = 2.0 * std::numbers::pi / 3.0;
  const double c = std::cos(a);
  const double root = std::sqrt(c * c + 3.0);
  std::vector<double> v{2.0 * std::cos(a + third), 2.0 * std::cos(a - third), c + root, c - root};
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<SpectrumRow> diagonal_spectrum(const Family& family, std::span<const double> samples) {
  if (family.k() != 4 || family.n() != 3 || !family.periodic()) {
    throw std::invalid_argument("diagonal_spectrum: needs a four-band family on the 3-torus");
  }
  std::vector<SpectrumRow> rows;
  rows.reserve(samples.size());
  for (double a : samples) {
    SpectrumRow row;
    row.a = a;
    const std::vector<double> b{a, a, a};
    row.numeric = family.spectrum(b);
    row.closed_form = diagonal_closed_form(a);
    for (std::size_t i = 0; i < 4; ++i) {
      row.max_deviation = std::max(row.max_deviation, std::abs(row.numeric[i] - row.closed_form[i]));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace swallowtail

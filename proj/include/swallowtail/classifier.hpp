#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swallowtail/family.hpp"
#include "swallowtail/singularity.hpp"

namespace swallowtail {

struct Signature {
  int minus = 0;
  int zero = 0;
  int plus = 0;

  int size() const { return minus + zero + plus; }
  /// e.g. "(---+)", zero directions as '0'
  std::string pattern() const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

enum class Classification { dirac, morse_other_signature, degenerate };

/// "dirac" | "morse-other" | "degenerate"
std::string to_string(Classification c);
Classification classification_from_string(const std::string& text);

struct ClassifierOptions {
  double signature_rel_tol = 1e-7;
  double signature_abs_floor = 1e-10;
  double tilt_tol = 1e-8;
  double cluster_tol = 1e-6;
};

/// Hessian of P in (b_1..b_n, z), symmetrized.
Eigen::MatrixXd hessian_at(const Family& family, std::span<const double> b, double z);

/// Eigenvalue counts with |mu| <= max(rel_tol * max|mu|, abs_floor) taken as zero.
Signature signature(const Eigen::MatrixXd& m, double rel_tol = 1e-7, double abs_floor = 1e-10);

bool is_dirac_signature(const Signature& s);

struct PointClass {
  Eigen::MatrixXd hessian;
  Signature signature;
  bool tilt_free = false;
  Classification classification = Classification::degenerate;
  StratumResult fiber;
  /// dirac points: the fiber has exactly one A_1 cluster at z.
  bool fiber_consistent = true;
};

PointClass classify(const Family& family, std::span<const double> b, double z, const ClassifierOptions& opts = {});

struct SpectrumRow {
  double a = 0.0;
  std::vector<double> numeric;       // ascending
  std::vector<double> closed_form;   // ascending
  double max_deviation = 0.0;
};

/// Bands of a four-band family along a = b = c, compared with
/// 2cos(a + 2pi/3), 2cos(a - 2pi/3), cos a +- sqrt(cos^2 a + 3).
/// Throws std::invalid_argument unless k = 4 and n = 3 on the torus.
std::vector<SpectrumRow> diagonal_spectrum(const Family& family, std::span<const double> samples);

/// The four closed-form diagonal bands, ascending.
std::vector<double> diagonal_closed_form(double a);

}  // namespace swallowtail

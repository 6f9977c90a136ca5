#pragma once

// Critical points of P with critical value 0: multistart Newton on grad P = 0,
// filtered by P = 0, deduplicated on the torus and grouped into loci.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swallowtail/classifier.hpp"
#include "swallowtail/family.hpp"

namespace swallowtail {

struct FinderOptions {
  int grid = 8;
  double grad_tol = 1e-8;
  double val_tol = 1e-8;
  double dedup_radius = 1e-4;
  int max_iterations = 100;
  int max_halvings = 30;
  /// Hessian eigenvalues with |mu| <= null_rel_tol * max|mu| are zero directions.
  double null_rel_tol = 1e-6;
  ClassifierOptions classifier;
  bool estimate_dimension = true;
};

struct CriticalPoint {
  std::vector<double> b;
  double z = 0.0;
  double residual_grad = 0.0;
  double residual_val = 0.0;
  Eigen::MatrixXd hessian;
  Signature signature;
  bool tilt_free = false;
  Classification classification = Classification::degenerate;
  StratumResult fiber;
  bool fiber_consistent = true;
  int locus_dim_estimate = 0;
  int hessian_null_dim = 0;
  int cloud_dim = 0;
  bool ambiguous = false;
  int component = -1;
  bool spurious = false;

  const Stratum& stratum() const { return fiber.stratum; }
};

struct LocusComponent {
  std::vector<std::size_t> members;
  int dimension = 0;
};

struct FinderDiagnostics {
  std::size_t seeds = 0;
  std::size_t singular_seeds = 0;  // Hessian rank-deficient at the seed
  std::size_t skipped_seeds = 0;   // Hessian zero with nonzero gradient
  std::size_t converged = 0;
  std::size_t nonconverged = 0;
  std::size_t filtered = 0;  // converged but |P| > val_tol or outside the box
  std::size_t deduped = 0;   // distinct points kept
};

struct SingularLocus {
  std::vector<CriticalPoint> points;
  std::vector<LocusComponent> components;
  FinderDiagnostics diagnostics;
  std::map<std::string, std::size_t> stratum_counts;

  bool empty() const { return points.empty(); }
  std::size_t dirac_count() const;
  /// Largest component dimension, -1 when empty.
  int dimension() const;
};

SingularLocus find_critical_points(const Family& family, const FinderOptions& opts = {});

struct DimensionEstimate {
  int hessian_null = 0;
  int cloud = 0;
  int estimate = 0;
  bool ambiguous = false;
};

/// Hessian null count and the spread of re-polished perturbations within
/// 10 * dedup_radius; the estimate is the smaller of the two.
DimensionEstimate estimate_locus_dimension(const Family& family, std::span<const double> b, double z,
                                           const FinderOptions& opts = {});

/// All b with Xi(b) = lambda from grid-seeded Gauss-Newton, canonicalized and
/// deduplicated. Empty when lambda is outside the image.
std::vector<std::vector<double>> singular_fiber_solve(const Family& family, std::span<const double> lambda,
                                                      const FinderOptions& opts = {});

struct ConsistencyEntry {
  std::size_t index = 0;
  double disc = 0.0;
  double scale = 1.0;
  int jacobian_rank = 0;
  int maximal_rank = 0;
  bool passed = false;
};

struct ConsistencyReport {
  std::vector<ConsistencyEntry> entries;
  std::size_t failed = 0;

  bool all_passed() const { return failed == 0; }
};

/// |disc(Xi(b))| <= disc_tol * scale and rank J_Xi(b) below the maximal rank
/// at every point; failing points are flagged spurious.
ConsistencyReport verify_discriminant_consistency(const Family& family, SingularLocus& locus,
                                                  double disc_tol = 1e-9, double rank_tol = 1e-6);

}  // namespace swallowtail

#pragma once

// Sampling of the characteristic region Xi(T^n), discriminant contacts and
// export to CSV / SVG / JSON.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "swallowtail/family.hpp"

namespace swallowtail {

struct RegionSample {
  std::vector<double> b;
  std::vector<double> xi;
  double disc = 1.0;
  int jac_rank = 0;
  bool near_disc = false;
};

struct RegionOptions {
  int grid = 40;
  /// near_disc: |disc| <= near_tol * (1 + max|disc|)
  double near_tol = 1e-6;
  /// Refined contacts must reach |disc| <= contact_tol * (1 + max|disc|).
  double contact_tol = 1e-9;
  double rank_tol = 1e-6;
  double rank_floor = 1e-7;
  bool compute_rank = true;
  bool compute_disc = true;
  bool refine_ranges = true;
  bool find_contacts = true;
  /// Samples are kept (and contacts searched) only up to this many grid points.
  std::size_t max_stored = 4'000'000;
  std::size_t max_contact_candidates = 256;
};

struct DiscriminantContact {
  std::vector<double> xi;
  std::vector<std::vector<double>> b;  // refined preimages found
  double disc = 0.0;
};

struct RegionSummary {
  int grid = 0;
  std::size_t count = 0;
  std::vector<std::pair<double, double>> ranges;  // per xi component
  std::vector<bool> constant;                     // component constant on the torus (exact)
  double min_disc = 0.0;
  double max_abs_disc = 0.0;
  std::size_t near_disc_count = 0;
  std::vector<std::size_t> rank_histogram;  // index = rank
  std::vector<DiscriminantContact> contacts;

  double disc_scale() const { return 1.0 + max_abs_disc; }
};

struct Region {
  std::vector<RegionSample> samples;  // empty when the grid exceeded max_stored
  RegionSummary summary;
};

/// G^n samples with xi, disc and jac_rank; near_disc against the sample-wide scale.
std::vector<RegionSample> sample_region(const Family& family, int grid, const RegionOptions& opts = {});

/// Sampling plus summary, refined component ranges and discriminant contacts.
Region analyze_region(const Family& family, const RegionOptions& opts = {});

/// disc(Xi(b)); 1 for k = 1.
double disc_at(const Family& family, std::span<const double> b);

struct CurveTrace {
  std::string label;
  std::vector<double> t;
  std::vector<std::vector<double>> xi;
};

/// Xi along the declared lines b(t) = t * direction; empty without curves.
std::vector<CurveTrace> boundary_curves(const Family& family, int samples = 400);

void write_csv(std::ostream& out, const Family& family, const std::vector<RegionSample>& samples);
void write_svg(std::ostream& out, const Family& family, const Region& region, const std::vector<CurveTrace>& curves);
nlohmann::json region_to_json(const Family& family, const Region& region, const std::vector<CurveTrace>& curves,
                              bool include_samples = true);
nlohmann::json summary_to_json(const RegionSummary& summary);

}  // namespace swallowtail

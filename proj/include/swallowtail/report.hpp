#pragma once

// Full analysis of one model and its JSON / text report.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "swallowtail/critical.hpp"
#include "swallowtail/family.hpp"
#include "swallowtail/graph_model.hpp"
#include "swallowtail/region.hpp"

namespace swallowtail {

inline constexpr const char* kReportSchema = "1";
inline constexpr const char* kToolVersion = SWALLOWTAIL_VERSION;

struct AnalyzeOptions {
  FinderOptions finder;
  bool region = true;
  RegionOptions region_options = [] {
    RegionOptions r;
    r.grid = 24;
    return r;
  }();
  double disc_tol = 1e-9;
  bool timestamp = true;
};

/// Isolated critical points sharing one base point b.
struct BasePoint {
  std::vector<double> b;
  std::vector<std::size_t> points;
  Stratum stratum;
  bool dirac = false;
  bool tilt_free = false;
};

struct AnalysisReport {
  ModelSpec model;
  Family family;
  SingularLocus locus;
  ConsistencyReport consistency;
  std::vector<BasePoint> base_points;
  std::optional<Region> region;
  std::optional<bool> edge_identity;  // set for simply-laced graphs without loops
  AnalyzeOptions options;

  bool no_singularities() const { return locus.empty(); }
  std::size_t dirac_base_points() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

AnalysisReport analyze(const ModelSpec& model, const AnalyzeOptions& opts = {});

nlohmann::json point_to_json(const CriticalPoint& p);

}  // namespace swallowtail

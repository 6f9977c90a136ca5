#include "swallowtail/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>
#include <stdexcept>

#include "swallowtail/parallel.hpp"

namespace swallowtail {

namespace {

std::string vec_text(const std::vector<double>& v) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", v[i]);
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + ")";
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json point_to_json(const CriticalPoint& p) {
  nlohmann::json fiber = nlohmann::json::array();
  for (const auto& c : p.fiber.clusters) fiber.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  return {
      {"b", p.b},
      {"z", p.z},
      {"residual_grad", p.residual_grad},
      {"residual_val", p.residual_val},
      {"hessian", matrix_json(p.hessian)},
      {"signature",
       {{"minus", p.signature.minus}, {"zero", p.signature.zero}, {"plus", p.signature.plus}, {"pattern", p.signature.pattern()}}},
      {"tilt_free", p.tilt_free},
      {"classification", to_string(p.classification)},
      {"stratum", p.stratum().label()},
      {"stratum_parts", p.stratum().parts},
      {"fiber", fiber},
      {"fiber_consistent", p.fiber_consistent},
      {"locus_dim_estimate", p.locus_dim_estimate},
      {"hessian_null_dim", p.hessian_null_dim},
      {"cloud_dim", p.cloud_dim},
      {"ambiguous", p.ambiguous},
      {"component", p.component},
      {"spurious", p.spurious},
  };
}

std::size_t AnalysisReport::dirac_base_points() const {
  std::size_t count = 0;
  for (const auto& bp : base_points) count += bp.dirac ? 1 : 0;
  return count;
}

AnalysisReport analyze(const ModelSpec& model, const AnalyzeOptions& opts) {
  AnalysisReport r{model, Family(model), {}, {}, {}, std::nullopt, std::nullopt, opts};
  r.locus = find_critical_points(r.family, opts.finder);
  r.consistency = verify_discriminant_consistency(r.family, r.locus, opts.disc_tol, opts.region_options.rank_tol);

  if (model.graph) {
    const LacingInfo info = simple_laced_no_loops(*model.graph);
    if (info.no_loops && info.simply_laced && model.graph->k >= 2) {
      r.edge_identity = edge_count_identity(*model.graph, r.family.char_poly());
    }
  }

  for (std::size_t i = 0; i < r.locus.points.size(); ++i) {
    const auto& p = r.locus.points[i];
    if (r.locus.components[static_cast<std::size_t>(p.component)].dimension > 0) continue;
    BasePoint* home = nullptr;
    for (auto& bp : r.base_points) {
      if (r.family.base_distance(bp.b, p.b) <= opts.finder.dedup_radius) home = &bp;
    }
    if (!home) {
      r.base_points.push_back({p.b, {}, p.stratum(), false, true});
      home = &r.base_points.back();
    }
    home->points.push_back(i);
    if (p.classification == Classification::dirac) {
      home->dirac = true;
      home->tilt_free = home->tilt_free && p.tilt_free;
    }
  }
  for (auto& bp : r.base_points) {
    if (!bp.dirac) bp.tilt_free = false;
  }

  if (opts.region) r.region = analyze_region(r.family, opts.region_options);
  return r;
}

nlohmann::json AnalysisReport::to_json() const {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", "swallowtail"}, {"version", kToolVersion}};
  if (options.timestamp) j["timestamp"] = utc_now();
  j["model"] = {{"name", model.name},
                {"k", family.k()},
                {"n", family.n()},
                {"backend", to_string(family.backend())},
                {"variables", family.variables()}};

  const auto& cp = family.char_poly();
  j["char_poly"] = {{"rendered", render(cp, family.variables(), false)},
                    {"traceless_form", render(cp, family.variables(), true)},
                    {"exact", swallowtail::to_json(cp)}};
  j["traceless"] = cp.is_traceless();
  if (edge_identity) {
    j["edge_count_identity"] = {{"applicable", true}, {"holds", *edge_identity},
                                {"edges", simple_laced_no_loops(*model.graph).edge_count}};
  } else {
    j["edge_count_identity"] = {{"applicable", false}};
  }

  j["critical_points"] = nlohmann::json::array();
  for (std::size_t i = 0; i < locus.points.size(); ++i) {
    auto pj = point_to_json(locus.points[i]);
    if (i < consistency.entries.size()) {
      const auto& e = consistency.entries[i];
      pj["disc"] = e.disc;
      pj["jacobian_rank"] = e.jacobian_rank;
    }
    j["critical_points"].push_back(pj);
  }
  j["components"] = nlohmann::json::array();
  for (std::size_t c = 0; c < locus.components.size(); ++c) {
    const auto& comp = locus.components[c];
    j["components"].push_back(
        {{"id", c}, {"size", comp.members.size()}, {"dimension", comp.dimension}, {"members", comp.members}});
  }
  j["base_points"] = nlohmann::json::array();
  for (const auto& bp : base_points) {
    j["base_points"].push_back({{"b", bp.b},
                                {"points", bp.points},
                                {"stratum", bp.stratum.label()},
                                {"dirac", bp.dirac},
                                {"tilt_free", bp.tilt_free}});
  }

  std::map<std::string, std::size_t> base_strata;
  for (const auto& bp : base_points) ++base_strata[bp.stratum.label()];
  std::size_t tilt_free_dirac = 0;
  for (const auto& p : locus.points) tilt_free_dirac += p.classification == Classification::dirac && p.tilt_free ? 1 : 0;
  std::size_t continuum_points = 0;
  for (const auto& comp : locus.components) continuum_points += comp.dimension > 0 ? comp.members.size() : 0;
  nlohmann::json summary = {
      {"critical_points", locus.points.size()},
      {"isolated_points", locus.points.size() - continuum_points},
      {"critical_base_points", base_points.size()},
      {"dirac_points", locus.dirac_count()},
      {"dirac_base_points", dirac_base_points()},
      {"tilt_free_dirac_points", tilt_free_dirac},
      {"strata_by_base_point", base_strata},
      {"strata_by_point", locus.stratum_counts},
      {"components", locus.components.size()},
      {"locus_dimension", locus.dimension()},
      {"consistency_failures", consistency.failed},
  };
  summary["message"] = no_singularities() ? "no singularities"
                       : locus.dimension() > 0
                           ? "singular locus of dimension " + std::to_string(locus.dimension())
                           : std::to_string(base_points.size()) + " isolated critical base points";
  j["summary"] = summary;

  if (region) j["region"] = summary_to_json(region->summary);

  const auto& d = locus.diagnostics;
  const auto& f = options.finder;
  j["diagnostics"] = {
      {"seeds", d.seeds},
      {"singular_seeds", d.singular_seeds},
      {"skipped_seeds", d.skipped_seeds},
      {"converged", d.converged},
      {"nonconverged", d.nonconverged},
      {"filtered", d.filtered},
      {"deduped", d.deduped},
      {"threads", worker_count()},
      {"tolerances",
       {{"grid", f.grid},
        {"grad_tol", f.grad_tol},
        {"val_tol", f.val_tol},
        {"dedup_radius", f.dedup_radius},
        {"max_iterations", f.max_iterations},
        {"max_halvings", f.max_halvings},
        {"null_rel_tol", f.null_rel_tol},
        {"signature_rel_tol", f.classifier.signature_rel_tol},
        {"signature_abs_floor", f.classifier.signature_abs_floor},
        {"tilt_tol", f.classifier.tilt_tol},
        {"cluster_tol", f.classifier.cluster_tol},
        {"disc_tol", options.disc_tol},
        {"region_grid", options.region ? options.region_options.grid : 0}}},
  };
  return j;
}

std::string AnalysisReport::to_text() const {
  std::ostringstream out;
  const auto& cp = family.char_poly();
  out << "model " << model.name << "  (k = " << family.k() << ", n = " << family.n() << ", "
      << to_string(family.backend()) << ")\n";
  out << "P = " << render(cp, family.variables(), false) << "\n";
  if (!cp.is_traceless()) out << "traceless form: " << render(cp, family.variables(), true) << "\n";
  if (edge_identity) out << "edge-count identity: " << (*edge_identity ? "holds" : "FAILS") << "\n";
  out << "\n";
  if (no_singularities()) {
    out << "no singularities\n";
  } else if (locus.dimension() > 0) {
    out << "singular locus of dimension " << locus.dimension() << " (" << locus.points.size() << " sampled points, "
        << locus.components.size() << " component(s), " << locus.dirac_count() << " dirac points)\n";
  } else {
    out << base_points.size() << " critical base points, " << dirac_base_points() << " dirac\n";
    for (const auto& bp : base_points) {
      out << "  b = " << vec_text(bp.b) << "  " << bp.stratum.label();
      if (bp.dirac) out << "  dirac" << (bp.tilt_free ? " (tilt-free)" : " (tilted)");
      out << "\n";
      for (std::size_t i : bp.points) {
        const auto& p = locus.points[i];
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9f", p.z);
        out << "      z = " << buf << "  signature " << p.signature.pattern() << "  " << to_string(p.classification)
            << (p.spurious ? "  SPURIOUS" : "") << "\n";
      }
    }
  }
  if (consistency.failed) out << consistency.failed << " point(s) failed the discriminant check\n";
  if (region) {
    const auto& s = region->summary;
    out << "\ncharacteristic region (grid " << s.grid << "):\n";
    for (std::size_t i = 0; i < s.ranges.size(); ++i) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "  xi%zu in [%.6f, %.6f]%s\n", i, s.ranges[i].first, s.ranges[i].second,
                    s.constant[i] ? "  (constant)" : "");
      out << buf;
    }
    out << "  discriminant contacts: " << s.contacts.size() << "\n";
    for (const auto& c : s.contacts) out << "    " << vec_text(c.xi) << "\n";
  }
  const auto& d = locus.diagnostics;
  out << "\nseeds " << d.seeds << ", converged " << d.converged << ", not converged " << d.nonconverged
      << ", filtered " << d.filtered << ", distinct " << d.deduped << "\n";
  return out.str();
}

}  // namespace swallowtail

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "swallowtail/trigpoly.hpp"

namespace swallowtail {

/// Directed representative i -> j of an undirected edge with weight e^{i m.b}.
/// The reverse orientation carries -m and is never stored.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  Frequency m;
  bool tree = false;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Decorated quotient graph: vertex order is the listed order, the spanning
/// tree is rooted at vertex 0 and its edges carry weight 1.
struct QuotientGraph {
  std::string name;
  std::size_t k = 0;  // vertices
  std::size_t n = 0;  // torus dimension
  std::vector<Edge> edges;
  std::vector<std::string> variables;

  friend bool operator==(const QuotientGraph&, const QuotientGraph&) = default;
};

/// Throws ModelError on the first violated invariant.
void validate(const QuotientGraph& graph);

struct LacingInfo {
  bool no_loops = true;
  bool simply_laced = true;
  std::size_t edge_count = 0;  // undirected edges of the simplified graph
};

LacingInfo simple_laced_no_loops(const QuotientGraph& graph);

/// k x k matrix of TrigPoly entries over an n-dimensional base.
class HamiltonianFamily {
 public:
  HamiltonianFamily() = default;
  HamiltonianFamily(std::size_t k, std::size_t n, Backend backend);

  std::size_t k() const { return k_; }
  std::size_t n() const { return n_; }
  Backend backend() const { return backend_; }

  const TrigPoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * k_ + j]; }
  TrigPoly& operator()(std::size_t i, std::size_t j) { return entries_[i * k_ + j]; }

  /// entries[j][i] == conjugate(entries[i][j]) exactly.
  bool is_hermitian() const;
  TrigPoly trace() const;

  Eigen::MatrixXcd evaluate(std::span<const double> b) const;

  friend bool operator==(const HamiltonianFamily&, const HamiltonianFamily&) = default;

 private:
  std::size_t k_ = 0;
  std::size_t n_ = 0;
  Backend backend_ = Backend::torus;
  std::vector<TrigPoly> entries_;
};

HamiltonianFamily harper_hamiltonian(const QuotientGraph& graph);

/// A straight line b(t) = t * direction through the origin of the base,
/// traced in the characteristic region plot.
struct BoundaryCurve {
  std::string label;
  std::vector<double> direction;
};

/// A model is either a quotient graph (torus base) or an explicit family.
struct ModelSpec {
  std::string name;
  std::optional<QuotientGraph> graph;
  HamiltonianFamily hamiltonian;
  std::vector<std::string> variables;
  std::vector<BoundaryCurve> curves;
  /// Sampling box [lo, hi]^n for affine families; ignored on the torus.
  std::pair<double, double> box{-1.0, 1.0};

  std::size_t k() const { return hamiltonian.k(); }
  std::size_t n() const { return hamiltonian.n(); }
  Backend backend() const { return hamiltonian.backend(); }
};

QuotientGraph parse_model(const nlohmann::json& config);
QuotientGraph parse_model(const std::string& text);
nlohmann::json render_model(const QuotientGraph& graph);

const std::vector<std::string>& builtin_model_names();
ModelSpec builtin_model(const std::string& name);

/// Accepts either a graph file or an explicit-family file.
ModelSpec load_model(const nlohmann::json& config);
nlohmann::json dump_model(const ModelSpec& model);

/// Built-in name, or path to a model file.
ModelSpec resolve_model(const std::string& name_or_path);

}  // namespace swallowtail

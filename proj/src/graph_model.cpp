#include "swallowtail/graph_model.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "swallowtail/errors.hpp"

namespace swallowtail {

namespace {

struct DisjointSet {
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<std::size_t> parent;
};

std::string edge_label(std::size_t index, const Edge& e) {
  return "edge " + std::to_string(index) + " (" + std::to_string(e.from) + "->" + std::to_string(e.to) + ")";
}

}  // namespace

void validate(const QuotientGraph& g) {
  const std::string where = "model '" + g.name + "': ";
  if (g.k == 0) throw ModelError(where + "graph needs at least one vertex");
  if (!g.variables.empty() && g.variables.size() != g.n) {
    throw ModelError(where + "variable name count does not match n");
  }
  DisjointSet all(g.k), tree(g.k);
  std::size_t tree_edges = 0;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.from >= g.k || e.to >= g.k) throw ModelError(where + edge_label(i, e) + " has an out-of-range vertex");
    if (e.m.size() != g.n) throw ModelError(where + edge_label(i, e) + " translation vector has wrong length");
    all.unite(e.from, e.to);
    if (!e.tree) continue;
    ++tree_edges;
    if (e.from == e.to) throw ModelError(where + edge_label(i, e) + " is a loop and cannot be a tree edge");
    if (std::any_of(e.m.begin(), e.m.end(), [](int x) { return x != 0; })) {
      throw ModelError(where + edge_label(i, e) + " is a spanning-tree edge with nonzero translation");
    }
    if (!tree.unite(e.from, e.to)) throw ModelError(where + "spanning tree contains a cycle");
  }
  for (std::size_t v = 1; v < g.k; ++v) {
    if (all.find(v) != all.find(0)) throw ModelError(where + "graph is disconnected");
  }
  if (tree_edges != g.k - 1) {
    throw ModelError(where + "spanning tree has " + std::to_string(tree_edges) + " edges, expected " +
                     std::to_string(g.k - 1));
  }
}

LacingInfo simple_laced_no_loops(const QuotientGraph& g) {
  LacingInfo info;
  std::set<std::pair<std::size_t, std::size_t>> classes;
  for (const Edge& e : g.edges) {
    if (e.from == e.to) {
      info.no_loops = false;
      continue;
    }
    auto key = std::minmax(e.from, e.to);
    if (!classes.insert(key).second) info.simply_laced = false;
  }
  info.edge_count = classes.size();
  return info;
}

HamiltonianFamily::HamiltonianFamily(std::size_t k, std::size_t n, Backend backend)
    : k_(k), n_(n), backend_(backend), entries_(k * k, TrigPoly(n, backend)) {}

bool HamiltonianFamily::is_hermitian() const {
  for (std::size_t i = 0; i < k_; ++i) {
    for (std::size_t j = i; j < k_; ++j) {
      if (!((*this)(j, i) == conjugate((*this)(i, j)))) return false;
    }
  }
  return true;
}

TrigPoly HamiltonianFamily::trace() const {
  TrigPoly t(n_, backend_);
  for (std::size_t i = 0; i < k_; ++i) t += (*this)(i, i);
  return t;
}

Eigen::MatrixXcd HamiltonianFamily::evaluate(std::span<const double> b) const {
  Eigen::MatrixXcd m(k_, k_);
  for (std::size_t i = 0; i < k_; ++i) {
    for (std::size_t j = 0; j < k_; ++j) m(i, j) = swallowtail::evaluate((*this)(i, j), b);
  }
  return m;
}

HamiltonianFamily harper_hamiltonian(const QuotientGraph& g) {
  HamiltonianFamily h(g.k, g.n, Backend::torus);
  for (const Edge& e : g.edges) {
    Frequency neg(e.m.size());
    std::transform(e.m.begin(), e.m.end(), neg.begin(), [](int x) { return -x; });
    // Loops land on the diagonal as w(e) + w(e reversed).
    h(e.from, e.to) += TrigPoly::monomial(e.m);
    h(e.to, e.from) += TrigPoly::monomial(neg);
  }
  return h;
}

QuotientGraph parse_model(const nlohmann::json& j) {
  QuotientGraph g;
  try {
    g.name = j.value("name", std::string("unnamed"));
    g.k = j.at("k").get<std::size_t>();
    g.n = j.at("n").get<std::size_t>();
    if (j.contains("variables")) g.variables = j.at("variables").get<std::vector<std::string>>();
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.from = je.at("from").get<std::size_t>();
      e.to = je.at("to").get<std::size_t>();
      e.m = je.at("m").get<Frequency>();
      e.tree = je.value("tree", false);
      g.edges.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("malformed model file: ") + ex.what());
  }
  if (g.variables.empty()) g.variables = default_variable_names(g.n);
  validate(g);
  return g;
}

QuotientGraph parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("model file is not valid JSON: ") + ex.what());
  }
  return parse_model(j);
}

nlohmann::json render_model(const QuotientGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"m", e.m}, {"tree", e.tree}});
  }
  return {{"name", g.name}, {"k", g.k}, {"n", g.n}, {"variables", g.variables}, {"edges", edges}};
}

namespace {

// Shorthand used by the zoo: edges given as (from, to, m, tree).
QuotientGraph make_graph(std::string name, std::size_t k, std::vector<std::string> vars, std::vector<Edge> edges) {
  QuotientGraph g;
  g.name = std::move(name);
  g.k = k;
  g.n = vars.size();
  g.variables = std::move(vars);
  g.edges = std::move(edges);
  validate(g);
  return g;
}

Edge tree_edge(std::size_t from, std::size_t to, std::size_t n) { return {from, to, Frequency(n, 0), true}; }

Edge edge(std::size_t from, std::size_t to, Frequency m) { return {from, to, std::move(m), false}; }

// H = a sigma_x + b sigma_y + c sigma_z (+ d Id)
HamiltonianFamily von_neumann_wigner(bool with_identity) {
  const std::size_t n = with_identity ? 4 : 3;
  HamiltonianFamily h(2, n, Backend::affine);
  const TrigPoly a = TrigPoly::coordinate(n, 0);
  const TrigPoly b = TrigPoly::coordinate(n, 1);
  const TrigPoly c = TrigPoly::coordinate(n, 2);
  const GaussianRational i_unit(0, 1);
  h(0, 0) = c;
  h(1, 1) = -c;
  h(0, 1) = a - b * i_unit;
  h(1, 0) = a + b * i_unit;
  if (with_identity) {
    const TrigPoly d = TrigPoly::coordinate(n, 3);
    h(0, 0) += d;
    h(1, 1) += d;
  }
  return h;
}

ModelSpec from_graph(QuotientGraph g) {
  ModelSpec spec;
  spec.name = g.name;
  spec.variables = g.variables;
  spec.hamiltonian = harper_hamiltonian(g);
  spec.graph = std::move(g);
  return spec;
}

}  // namespace

const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names = {
      "gyroid",       "honeycomb",    "diamond",       "p_lattice", "triangle", "triangle_ab",
      "triangle_abc", "triangle_abd", "triangle_abcd", "vnw3",      "vnw4"};
  return names;
}

ModelSpec builtin_model(const std::string& name) {
  if (name == "gyroid") {
    // Full square K4, tree = star at vertex 0; H12 = A, H13 = B*, H23 = C.
    auto spec = from_graph(make_graph("gyroid", 4, {"a", "b", "c"},
                                      {tree_edge(0, 1, 3), tree_edge(0, 2, 3), tree_edge(0, 3, 3),
                                       edge(1, 2, {1, 0, 0}), edge(1, 3, {0, -1, 0}), edge(2, 3, {0, 0, 1})}));
    spec.curves = {{"a=b=c", {1.0, 1.0, 1.0}}, {"a=b=-c", {1.0, 1.0, -1.0}}};
    return spec;
  }
  if (name == "honeycomb") {
    return from_graph(make_graph("honeycomb", 2, {"u", "v"},
                                 {tree_edge(0, 1, 2), edge(0, 1, {1, 0}), edge(0, 1, {0, 1})}));
  }
  if (name == "diamond") {
    return from_graph(make_graph(
        "diamond", 2, {"u", "v", "w"},
        {tree_edge(0, 1, 3), edge(0, 1, {1, 0, 0}), edge(0, 1, {0, 1, 0}), edge(0, 1, {0, 0, 1})}));
  }
  if (name == "p_lattice") {
    return from_graph(make_graph("p_lattice", 1, {"u", "v", "w"},
                                 {edge(0, 0, {1, 0, 0}), edge(0, 0, {0, 1, 0}), edge(0, 0, {0, 0, 1})}));
  }
  if (name == "triangle") {
    return from_graph(make_graph("triangle", 3, {"a"}, {tree_edge(0, 1, 1), tree_edge(0, 2, 1), edge(1, 2, {1})}));
  }
  if (name == "triangle_ab") {
    return from_graph(make_graph("triangle_ab", 3, {"a", "b"},
                                 {tree_edge(0, 1, 2), tree_edge(0, 2, 2), edge(1, 2, {1, 0}), edge(1, 2, {0, 1})}));
  }
  if (name == "triangle_abc") {
    // One triple bond between vertices 1 and 2.
    return from_graph(make_graph("triangle_abc", 3, {"a", "b", "c"},
                                 {tree_edge(0, 1, 3), tree_edge(0, 2, 3), edge(1, 2, {1, 0, 0}),
                                  edge(1, 2, {0, 1, 0}), edge(1, 2, {0, 0, 1})}));
  }
  if (name == "triangle_abd") {
    // Double bonds on 1-2 and on the tree edge 0-1.
    return from_graph(make_graph("triangle_abd", 3, {"a", "b", "d"},
                                 {tree_edge(0, 1, 3), tree_edge(0, 2, 3), edge(1, 2, {1, 0, 0}),
                                  edge(1, 2, {0, 1, 0}), edge(0, 1, {0, 0, 1})}));
  }
  if (name == "triangle_abcd") {
    return from_graph(make_graph("triangle_abcd", 3, {"a", "b", "c", "d"},
                                 {tree_edge(0, 1, 4), tree_edge(0, 2, 4), edge(1, 2, {1, 0, 0, 0}),
                                  edge(1, 2, {0, 1, 0, 0}), edge(0, 1, {0, 0, 1, 0}), edge(0, 2, {0, 0, 0, 1})}));
  }
  if (name == "vnw3" || name == "vnw4") {
    ModelSpec spec;
    spec.name = name;
    spec.hamiltonian = von_neumann_wigner(name == "vnw4");
    spec.variables = default_variable_names(spec.hamiltonian.n());
    return spec;
  }
  std::string list;
  for (const auto& known : builtin_model_names()) list += (list.empty() ? "" : ", ") + known;
  throw ModelError("unknown model '" + name + "'; available models: " + list);
}

ModelSpec load_model(const nlohmann::json& j) {
  if (j.contains("edges")) {
    auto spec = from_graph(parse_model(j));
    if (j.contains("curves")) {
      for (const auto& c : j.at("curves")) {
        spec.curves.push_back({c.at("label").get<std::string>(), c.at("direction").get<std::vector<double>>()});
      }
    }
    return spec;
  }
  ModelSpec spec;
  try {
    spec.name = j.value("name", std::string("unnamed"));
    const auto k = j.at("k").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    const Backend backend = backend_from_string(j.value("backend", std::string("affine")));
    spec.hamiltonian = HamiltonianFamily(k, n, backend);
    const auto& rows = j.at("hamiltonian");
    if (rows.size() != k) throw ModelError("model '" + spec.name + "': hamiltonian must have k rows");
    for (std::size_t r = 0; r < k; ++r) {
      if (rows[r].size() != k) throw ModelError("model '" + spec.name + "': hamiltonian must be k x k");
      for (std::size_t c = 0; c < k; ++c) {
        TrigPoly p = trigpoly_from_json(rows[r][c]);
        if (p.dim() != n || p.backend() != backend) {
          throw ModelError("model '" + spec.name + "': entry dimension/backend mismatch");
        }
        spec.hamiltonian(r, c) = std::move(p);
      }
    }
    spec.variables = j.contains("variables") ? j.at("variables").get<std::vector<std::string>>()
                                             : default_variable_names(n);
    if (spec.variables.size() != n) throw ModelError("model '" + spec.name + "': variable count does not match n");
    if (j.contains("box")) {
      auto box = j.at("box").get<std::vector<double>>();
      if (box.size() != 2 || !(box[0] < box[1])) throw ModelError("model '" + spec.name + "': bad box");
      spec.box = {box[0], box[1]};
    }
    if (j.contains("curves")) {
      for (const auto& c : j.at("curves")) {
        spec.curves.push_back({c.at("label").get<std::string>(), c.at("direction").get<std::vector<double>>()});
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError(std::string("malformed model file: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw ModelError(std::string("malformed model file: ") + ex.what());
  }
  if (!spec.hamiltonian.is_hermitian()) throw ModelError("model '" + spec.name + "': hamiltonian is not Hermitian");
  return spec;
}

nlohmann::json dump_model(const ModelSpec& spec) {
  nlohmann::json j;
  if (spec.graph) {
    j = render_model(*spec.graph);
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < spec.k(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < spec.k(); ++c) row.push_back(to_json(spec.hamiltonian(r, c)));
      rows.push_back(row);
    }
    j = {{"name", spec.name},
         {"k", spec.k()},
         {"n", spec.n()},
         {"backend", to_string(spec.backend())},
         {"variables", spec.variables},
         {"box", {spec.box.first, spec.box.second}},
         {"hamiltonian", rows}};
  }
  if (!spec.curves.empty()) {
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : spec.curves) curves.push_back({{"label", c.label}, {"direction", c.direction}});
    j["curves"] = curves;
  }
  return j;
}

ModelSpec resolve_model(const std::string& name_or_path) {
  const auto& names = builtin_model_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_model(name_or_path);
  if (!std::filesystem::exists(name_or_path)) {
    const bool looks_like_path = name_or_path.find('/') != std::string::npos ||
                                 std::filesystem::path(name_or_path).extension() == ".json";
    if (looks_like_path) throw IoError("model file '" + name_or_path + "' does not exist");
    return builtin_model(name_or_path);  // throws with suggestions
  }
  std::ifstream in(name_or_path);
  if (!in) throw IoError("cannot read model file '" + name_or_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& ex) {
    throw ModelError("model file '" + name_or_path + "' is not valid JSON: " + ex.what());
  }
  return load_model(j);
}

}  // namespace swallowtail

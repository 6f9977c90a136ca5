#include "doctest.h"
#include "helpers.hpp"
#include "swallowtail/charpoly.hpp"
#include "swallowtail/errors.hpp"
#include "swallowtail/graph_model.hpp"

using namespace swallowtail;

namespace {

const char* kTriangle = R"({
  "name": "triangle", "k": 3, "n": 1,
  "edges": [
    {"from": 0, "to": 1, "m": [0], "tree": true},
    {"from": 0, "to": 2, "m": [0], "tree": true},
    {"from": 1, "to": 2, "m": [1]}
  ]
})";

TrigPoly e(Frequency m) { return TrigPoly::monomial(std::move(m)); }

}  // namespace

TEST_SUITE("graph_model") {
  TEST_CASE("parse_model") {
    const QuotientGraph g = parse_model(std::string(kTriangle));
    CHECK(g.k == 3);
    CHECK(g.n == 1);
    CHECK(g.edges.size() == 3);

    auto bad = nlohmann::json::parse(kTriangle);
    bad["edges"][0]["m"] = {1};
    CHECK_THROWS_AS(parse_model(bad), ModelError);

    auto range = nlohmann::json::parse(kTriangle);
    range["k"] = 4;
    range["edges"][2]["to"] = 5;
    CHECK_THROWS_AS(parse_model(range), ModelError);

    auto disconnected = nlohmann::json::parse(kTriangle);
    disconnected["k"] = 4;
    CHECK_THROWS_AS(parse_model(disconnected), ModelError);

    auto cyclic = nlohmann::json::parse(kTriangle);
    cyclic["edges"][2]["tree"] = true;
    cyclic["edges"][2]["m"] = {0};
    CHECK_THROWS_AS(parse_model(cyclic), ModelError);

    CHECK_THROWS_AS(parse_model(std::string("{not json")), ModelError);
    CHECK_THROWS_AS(parse_model(std::string(R"({"k": 2})")), ModelError);
  }

  TEST_CASE("render round trip") {
    for (const auto& name : builtin_model_names()) {
      const auto spec = builtin_model(name);
      if (!spec.graph) continue;
      CHECK_MESSAGE(parse_model(render_model(*spec.graph)) == *spec.graph, name);
      CHECK_MESSAGE(parse_model(render_model(*spec.graph).dump()) == *spec.graph, name);
    }
  }

  TEST_CASE("harper_hamiltonian") {
    const auto gyroid = builtin_model("gyroid");
    const auto& h = gyroid.hamiltonian;
    CHECK(h.k() == 4);
    CHECK(h.n() == 3);
    CHECK(h(0, 0).is_zero());
    for (std::size_t j = 1; j < 4; ++j) CHECK(h(0, j) == TrigPoly::constant(3, 1));
    CHECK(h(1, 2) == e({1, 0, 0}));
    CHECK(h(1, 3) == e({0, -1, 0}));
    CHECK(h(2, 3) == e({0, 0, 1}));
    CHECK(h(2, 1) == e({-1, 0, 0}));

    const auto hc = builtin_model("honeycomb").hamiltonian;
    CHECK(hc(0, 1) == TrigPoly::constant(2, 1) + e({1, 0}) + e({0, 1}));

    const auto p = builtin_model("p_lattice").hamiltonian;
    CHECK(p.k() == 1);
    TrigPoly expect(3);
    for (const Frequency& m : {Frequency{1, 0, 0}, Frequency{0, 1, 0}, Frequency{0, 0, 1}}) {
      Frequency neg{-m[0], -m[1], -m[2]};
      expect += e(m) + e(neg);
    }
    CHECK(p(0, 0) == expect);
  }

  TEST_CASE("harper families are hermitian, and traceless without loops") {
    for (const auto& name : builtin_model_names()) {
      const auto spec = builtin_model(name);
      CHECK_MESSAGE(spec.hamiltonian.is_hermitian(), name);
      if (spec.graph && simple_laced_no_loops(*spec.graph).no_loops) {
        CHECK_MESSAGE(spec.hamiltonian.trace().is_zero(), name);
      }
    }
  }

  TEST_CASE("builtin_model") {
    const auto g = builtin_model("gyroid");
    REQUIRE(g.graph);
    CHECK(g.k() == 4);
    CHECK(g.n() == 3);
    CHECK(g.graph->edges.size() == 6);

    const auto v = builtin_model("vnw3");
    CHECK_FALSE(v.graph);
    CHECK(v.backend() == Backend::affine);
    const auto cp = traceless_shift(char_poly(v.hamiltonian));
    TrigPoly expect(3, Backend::affine);
    for (const Frequency& m : {Frequency{2, 0, 0}, Frequency{0, 2, 0}, Frequency{0, 0, 2}}) {
      expect -= TrigPoly::monomial(m, 1, Backend::affine);
    }
    CHECK(cp.shifted[0] == expect);
    CHECK(builtin_model("vnw4").n() == 4);

    CHECK_THROWS_AS(builtin_model("nosuch"), ModelError);
    try {
      builtin_model("nosuch");
    } catch (const ModelError& err) {
      CHECK(std::string(err.what()).find("gyroid") != std::string::npos);
    }
  }

  TEST_CASE("simple_laced_no_loops") {
    const auto gy = simple_laced_no_loops(*builtin_model("gyroid").graph);
    CHECK(gy.no_loops);
    CHECK(gy.simply_laced);
    CHECK(gy.edge_count == 6);

    const auto hc = simple_laced_no_loops(*builtin_model("honeycomb").graph);
    CHECK(hc.no_loops);
    CHECK_FALSE(hc.simply_laced);
    CHECK(hc.edge_count == 1);

    CHECK_FALSE(simple_laced_no_loops(*builtin_model("p_lattice").graph).no_loops);

    const auto tri = simple_laced_no_loops(*builtin_model("triangle").graph);
    CHECK(tri.simply_laced);
    CHECK(tri.edge_count == 3);
  }

  TEST_CASE("model files") {
    for (const auto& name : builtin_model_names()) {
      const auto spec = builtin_model(name);
      const auto again = load_model(dump_model(spec));
      CHECK_MESSAGE(again.hamiltonian == spec.hamiltonian, name);
      CHECK_MESSAGE(again.name == spec.name, name);
    }
    CHECK(resolve_model("triangle").k() == 3);
    CHECK_THROWS_AS(resolve_model("/nonexistent/model.json"), Error);
  }
}

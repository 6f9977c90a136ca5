#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "swallowtail/region.hpp"

using namespace swallowtail;
using testing::pi;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("region") {
  TEST_CASE("gyroid sampling") {
    const Family f(builtin_model("gyroid"));
    const auto samples = sample_region(f, 12);
    CHECK(samples.size() == 12 * 12 * 12);
    for (const auto& s : samples) {
      REQUIRE(s.xi.size() == 3);
      CHECK(s.xi[2] == -6.0);
    }
    RegionOptions opts;
    opts.grid = 40;
    const auto region = analyze_region(f, opts);
    const auto& r = region.summary.ranges;
    CHECK(r[0].first == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(r[0].second == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(r[1].first == doctest::Approx(-8.0).epsilon(1e-9));
    CHECK(r[1].second == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(region.summary.constant[2]);
    CHECK(region.summary.min_disc >= -1e-9 * region.summary.disc_scale());
    CHECK(region.summary.contacts.size() == 3);
  }

  TEST_CASE("interval regions") {
    RegionOptions opts;
    opts.grid = 100;
    const auto hc = analyze_region(Family(builtin_model("honeycomb")), opts);
    CHECK(hc.summary.ranges[0].first == doctest::Approx(-9.0).epsilon(1e-9));
    CHECK(std::abs(hc.summary.ranges[0].second) < 1e-9);
    opts.grid = 40;
    const auto dia = analyze_region(Family(builtin_model("diamond")), opts);
    CHECK(dia.summary.ranges[0].first == doctest::Approx(-16.0).epsilon(1e-9));
    CHECK(std::abs(dia.summary.ranges[0].second) < 1e-9);
  }

  TEST_CASE("jacobian_rank") {
    const Family gy(builtin_model("gyroid"));
    CHECK(jacobian_rank(gy.characteristic_map(), std::vector<double>{pi / 2, pi / 2, pi / 2}) == 0);
    CHECK(jacobian_rank(gy.characteristic_map(), std::vector<double>{0.3, 1.1, 2.0}) == 2);
    CHECK(maximal_jacobian_rank(gy.characteristic_map()) == 2);
    const Family hc(builtin_model("honeycomb"));
    CHECK(jacobian_rank(hc.characteristic_map(), std::vector<double>{2 * pi / 3, -2 * pi / 3}) == 0);
    CHECK(jacobian_rank(hc.characteristic_map(), std::vector<double>{0.3, 1.0}) == 1);
  }

  TEST_CASE("boundary_curves") {
    const Family gy(builtin_model("gyroid"));
    const auto curves = boundary_curves(gy, 4);
    REQUIRE(curves.size() == 2);
    for (const auto& c : curves) {
      CHECK(c.t.front() == 0.0);
      CHECK(c.xi.front()[0] == doctest::Approx(-3.0));
      CHECK(c.xi.front()[1] == doctest::Approx(-8.0));
    }
    // four samples over [0, 2pi): t = 0, pi/2, pi, 3pi/2
    CHECK(curves[0].t[1] == doctest::Approx(pi / 2));
    CHECK(curves[0].xi[1][0] == doctest::Approx(9.0));
    CHECK(std::abs(curves[0].xi[1][1]) < 1e-12);
    CHECK(boundary_curves(Family(builtin_model("honeycomb"))).empty());
  }

  TEST_CASE("disc of every model stays nonnegative on the region") {
    for (const auto& name : builtin_model_names()) {
      const Family f(builtin_model(name));
      RegionOptions opts;
      opts.grid = f.n() >= 4 ? 8 : f.n() == 3 ? 14 : 40;
      opts.find_contacts = false;
      opts.refine_ranges = false;
      const auto region = analyze_region(f, opts);
      CHECK_MESSAGE(region.summary.min_disc >= -1e-9 * region.summary.disc_scale(), name);
    }
  }

  TEST_CASE("simply-laced graphs keep the edge count column constant") {
    for (const char* name : {"gyroid", "triangle"}) {
      const Family f(builtin_model(name));
      const auto samples = sample_region(f, 10);
      const double edges = name == std::string("gyroid") ? -6.0 : -3.0;
      for (const auto& s : samples) CHECK(s.xi.back() == edges);
    }
  }

  TEST_CASE("critical points land in the near-discriminant set") {
    const Family tri(builtin_model("triangle"));
    // the grid on [0, 2pi) contains a = 0 and a = pi when G is even
    const auto samples = sample_region(tri, 10);
    CHECK(samples[0].near_disc);
    CHECK(samples[5].near_disc);
    CHECK_FALSE(samples[2].near_disc);
  }

  TEST_CASE("csv export") {
    const Family gy(builtin_model("gyroid"));
    std::ostringstream empty;
    write_csv(empty, gy, {});
    CHECK(empty.str() == "a,b,c,xi0,xi1,xi2,disc,jac_rank\r\n");

    std::ostringstream out;
    const auto samples = sample_region(Family(builtin_model("honeycomb")), 5);
    write_csv(out, Family(builtin_model("honeycomb")), samples);
    CHECK(count(out.str(), "\r\n") == 26);
  }

  TEST_CASE("svg export") {
    const Family gy(builtin_model("gyroid"));
    RegionOptions opts;
    opts.grid = 40;
    const auto region = analyze_region(gy, opts);
    std::ostringstream out;
    write_svg(out, gy, region, boundary_curves(gy));
    const std::string svg = out.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("width=\"800\"") != std::string::npos);
    CHECK(svg.find("height=\"600\"") != std::string::npos);
    CHECK(count(svg, "class=\"contact\"") == 3);
    CHECK(svg.find("</svg>") != std::string::npos);

    const auto j = region_to_json(gy, region, boundary_curves(gy), false);
    CHECK(j.at("schema") == "1");
    CHECK(j.at("summary").at("contacts").size() == 3);
  }
}

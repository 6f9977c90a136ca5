#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "swallowtail/singularity.hpp"

using namespace swallowtail;

namespace {

double disc4(double a0, double a1, double a2) {
  const std::vector<double> lambda{a0, a1, a2};
  return discriminant(lambda, 4);
}

}  // namespace

TEST_SUITE("singularity") {
  TEST_CASE("discriminant") {
    CHECK(std::abs(disc4(-3, -8, -6)) < 1e-9);
    CHECK(std::abs(disc4(9, 0, -6)) < 1e-9);
    CHECK(discriminant(std::vector<double>{0.0}, 2) == doctest::Approx(0.0));
    CHECK(discriminant(std::vector<double>{-1.0}, 2) == doctest::Approx(4.0));
    CHECK_THROWS(discriminant(std::vector<double>{}, 1));

    // all-real roots give a nonnegative value: (z-1)(z-2)(z+3) = z^3 - 7z + 6
    CHECK(discriminant(std::vector<double>{6, -7}, 3) > 0);
    // z^3 - 3z + c vanishes at c = +-2
    CHECK(std::abs(discriminant(std::vector<double>{2, -3}, 3)) < 1e-9);
    CHECK(std::abs(discriminant(std::vector<double>{-2, -3}, 3)) < 1e-9);
    CHECK(discriminant(std::vector<double>{0, -3}, 3) == doctest::Approx(108.0));
  }

  TEST_CASE("exact discriminant") {
    const std::vector<mpq_class> lambda{mpq_class(-3), mpq_class(-8), mpq_class(-6)};
    CHECK(discriminant_exact(lambda, 4) == 0);
    const std::vector<mpq_class> q{mpq_class(1, 3), mpq_class(-1, 2)};
    const double approx = discriminant(std::vector<double>{1.0 / 3.0, -0.5}, 3);
    CHECK(discriminant_exact(q, 3).get_d() == doctest::Approx(approx).epsilon(1e-14));
  }

  TEST_CASE("a3_slice_closed_form") {
    CHECK(a3_slice_closed_form(9, 0) == 0.0);
    CHECK(a3_slice_closed_form(-3, -8) == 0.0);
    CHECK(a3_slice_closed_form(0, 0) == 0.0);
    CHECK(kSliceDiscriminantNormalization == 1);
  }

  TEST_CASE("slice discriminant equals the closed form") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 10000; ++i) {
      const double a0 = u(rng), a1 = u(rng);
      const double closed = a3_slice_closed_form(a0, a1);
      const double disc = disc4(a0, a1, -6);
      const double scale = std::max(std::abs(closed), 1e-300);
      REQUIRE(std::abs(kSliceDiscriminantNormalization * disc - closed) <= 1e-9 * scale + 1e-9);
    }
  }

  TEST_CASE("stratum_of") {
    const auto cusp = stratum_of(std::vector<double>{-3, -8, -6}, 4);
    CHECK(cusp.stratum.parts == std::vector<int>{2});
    CHECK(cusp.stratum.label() == "(A_2)");
    REQUIRE(cusp.clusters.size() == 2);
    CHECK(cusp.clusters[0].value == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(cusp.clusters[0].multiplicity == 3);
    CHECK(cusp.clusters[1].value == doctest::Approx(3.0));

    const auto dirac = stratum_of(std::vector<double>{9, 0, -6}, 4);
    CHECK(dirac.stratum.parts == std::vector<int>{1, 1});
    REQUIRE(dirac.clusters.size() == 2);
    CHECK(dirac.clusters[0].value == doctest::Approx(-std::sqrt(3.0)));
    CHECK(dirac.clusters[1].multiplicity == 2);

    const auto generic = stratum_of(std::vector<double>{1, 0, -6}, 4);
    CHECK(generic.stratum.empty());
    CHECK(generic.clusters.size() == 4);

    // z^2 + 1 has no real roots
    CHECK_THROWS(stratum_of(std::vector<double>{1.0}, 2));
  }

  TEST_CASE("stratum_from_roots") {
    const auto s = stratum_from_roots({1.0, -1.0, 1.0 + 1e-9, -1.0, -1.0});
    CHECK(s.stratum.parts == std::vector<int>{1, 2});
    CHECK(s.stratum.label() == "(A_1,A_2)");
  }

  TEST_CASE("grothendieck_valid") {
    CHECK(grothendieck_valid(Stratum{{2}}, 4));
    CHECK(grothendieck_valid(Stratum{{1, 1}}, 4));
    CHECK_FALSE(grothendieck_valid(Stratum{{3}}, 3));
    CHECK(grothendieck_valid(Stratum{}, 2));
  }

  TEST_CASE("empty stratum iff the discriminant is away from zero") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 500; ++i) {
      // real-rooted traceless quartics
      std::vector<double> r{u(rng), u(rng), u(rng)};
      if (i % 5 == 0) r[1] = r[0];
      r.push_back(-(r[0] + r[1] + r[2]));
      // expand prod (z - r_i)
      std::vector<double> c{1.0};
      for (double root : r) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
          next[j + 1] += c[j];
          next[j] -= root * c[j];
        }
        c = next;
      }
      const std::vector<double> lambda{c[0], c[1], c[2]};
      const double tol = 1e-6;
      const auto res = stratum_of(lambda, 4, tol);
      CHECK(grothendieck_valid(res.stratum, 4));
      double min_gap = 1e300;
      for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) min_gap = std::min(min_gap, std::abs(r[a] - r[b]));
      }
      if (min_gap > 0.1) CHECK(res.stratum.empty());
      if (min_gap == 0.0) CHECK_FALSE(res.stratum.empty());
    }
  }
}

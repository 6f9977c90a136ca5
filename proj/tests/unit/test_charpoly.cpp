#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "helpers.hpp"
#include "swallowtail/charpoly.hpp"
#include "swallowtail/singularity.hpp"

using namespace swallowtail;
using testing::pi;

namespace {

TrigPoly cosine(Frequency m, long coeff) {
  Frequency neg = m;
  for (auto& x : neg) x = -x;
  return TrigPoly::monomial(m, coeff) + TrigPoly::monomial(neg, coeff);
}

// coeff * cos(m.b) written as two exponentials with half the weight
TrigPoly cos_term(Frequency m, long twice_coeff) { return cosine(std::move(m), twice_coeff / 2); }

}  // namespace

TEST_SUITE("charpoly") {
  TEST_CASE("gyroid coefficients") {
    const auto cp = char_poly(builtin_model("gyroid").hamiltonian);
    REQUIRE(cp.k == 4);
    CHECK(cp.coeffs[3].is_zero());
    CHECK(cp.coeffs[2] == TrigPoly::constant(3, -6));
    const TrigPoly a1 = cos_term({1, 0, 0}, -2) + cos_term({0, 1, 0}, -2) + cos_term({0, 0, 1}, -2) +
                        cos_term({1, 1, 1}, -2);
    const TrigPoly a0 = TrigPoly::constant(3, 3) + cos_term({1, 1, 0}, -2) + cos_term({0, 1, 1}, -2) +
                        cos_term({1, 0, 1}, -2);
    CHECK(cp.coeffs[1] == a1);
    CHECK(cp.coeffs[0] == a0);
    CHECK(render(cp, std::vector<std::string>{"a", "b", "c"}) ==
          "z^4 - 6z^2 + (-2cos(a) - 2cos(b) - 2cos(c) - 2cos(a+b+c))z + (3 - 2cos(a+b) - 2cos(a+c) - 2cos(b+c))");
  }

  TEST_CASE("honeycomb coefficients") {
    const auto cp = char_poly(builtin_model("honeycomb").hamiltonian);
    CHECK(cp.coeffs[1].is_zero());
    CHECK(cp.coeffs[0] ==
          TrigPoly::constant(2, -3) + cos_term({1, 0}, -2) + cos_term({0, 1}, -2) + cos_term({1, -1}, -2));
  }

  TEST_CASE("zero hamiltonian gives z^k") {
    const HamiltonianFamily zero(3, 2, Backend::torus);
    const auto cp = char_poly(zero);
    for (const auto& a : cp.coeffs) CHECK(a.is_zero());
  }

  TEST_CASE("char_poly rejects non-hermitian input") {
    HamiltonianFamily h(2, 1, Backend::torus);
    h(0, 1) = TrigPoly::monomial({1});
    CHECK_THROWS(char_poly(h));
  }

  TEST_CASE("cycle_expansion agrees with the determinant") {
    for (const auto& name : builtin_model_names()) {
      const auto spec = builtin_model(name);
      if (!spec.graph) continue;
      const auto det = char_poly(spec.hamiltonian);
      const auto cyc = cycle_expansion(*spec.graph);
      REQUIRE(det.coeffs.size() == cyc.coeffs.size());
      for (std::size_t j = 0; j < det.coeffs.size(); ++j) CHECK_MESSAGE(det.coeffs[j] == cyc.coeffs[j], name);
    }
    const auto tri = cycle_expansion(*builtin_model("triangle").graph);
    CHECK(tri.coeffs[0] == cos_term({1}, -2));
    CHECK(tri.coeffs[1] == TrigPoly::constant(1, -3));

    const auto p = cycle_expansion(*builtin_model("p_lattice").graph);
    CHECK(p.coeffs[0] == cos_term({1, 0, 0}, -2) + cos_term({0, 1, 0}, -2) + cos_term({0, 0, 1}, -2));
  }

  TEST_CASE("traceless_shift") {
    const auto gy = traceless_shift(char_poly(builtin_model("gyroid").hamiltonian));
    for (std::size_t j = 0; j + 1 < gy.k; ++j) CHECK(gy.shifted[j] == gy.coeffs[j]);
    CHECK(gy.shift.is_zero());

    const auto p = traceless_shift(char_poly(builtin_model("p_lattice").hamiltonian));
    CHECK(p.shifted.empty());
    CHECK_FALSE(p.shift.is_zero());

    // z^2 + 2c z + c^2 -> z^2
    CharPolyFamily sq;
    sq.k = 2;
    sq.n = 1;
    const TrigPoly c = cosine({1}, 1);
    sq.coeffs = {mul(c, c), c * GaussianRational(2)};
    const auto shifted = traceless_shift(sq);
    CHECK(shifted.shifted[0].is_zero());
    CHECK(shifted.shift == c);
  }

  TEST_CASE("edge_count_identity") {
    const auto gy = builtin_model("gyroid");
    CHECK(edge_count_identity(*gy.graph, char_poly(gy.hamiltonian)));
    const auto tri = builtin_model("triangle");
    CHECK(edge_count_identity(*tri.graph, char_poly(tri.hamiltonian)));
    CHECK(traceless_shift(char_poly(tri.hamiltonian)).shifted[1] == TrigPoly::constant(1, -3));
    const auto hc = builtin_model("honeycomb");
    CHECK_THROWS(edge_count_identity(*hc.graph, char_poly(hc.hamiltonian)));
  }

  TEST_CASE("gradient_and_hessian_data") {
    const auto cp = traceless_shift(char_poly(builtin_model("gyroid").hamiltonian));
    const auto d = gradient_and_hessian_data(cp);
    // dP/dz = 4z^3 - 12z + a_1
    const ZPoly& pz = d.grad[3];
    REQUIRE(pz.size() == 4);
    CHECK(pz[3] == TrigPoly::constant(3, 4));
    CHECK(pz[2].is_zero());
    CHECK(pz[1] == TrigPoly::constant(3, -12));
    CHECK(pz[0] == cp.coeffs[1]);

    const std::vector<double> origin{0, 0, 0};
    for (double z : {-2.0, 0.5, 3.0}) CHECK(std::abs(evaluate(d.grad[0], origin, z)) < 1e-15);

    const auto hc = traceless_shift(char_poly(builtin_model("honeycomb").hamiltonian));
    const auto dh = gradient_and_hessian_data(hc);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 5; ++i) {
      const std::vector<double> b{u(rng), u(rng)};
      CHECK(evaluate(dh.hessian(2, 2), b, u(rng)) == doctest::Approx(2.0));
    }
  }

  TEST_CASE("evaluator jets match the exact derivative data") {
    const auto cp = traceless_shift(char_poly(builtin_model("triangle_ab").hamiltonian));
    const auto d = gradient_and_hessian_data(cp);
    const FamilyEvaluator ev(cp);
    const std::vector<double> b{0.7, -1.3};
    const double z = 0.4;
    const auto jet = ev.jet(b, z, 2);
    CHECK(jet.value == doctest::Approx(evaluate(d.value, b, z)));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(jet.grad(static_cast<Eigen::Index>(i)) == doctest::Approx(evaluate(d.grad[i], b, z)));
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(jet.hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
              doctest::Approx(evaluate(d.hessian(i, j), b, z)));
      }
    }
  }

  TEST_CASE("roots of P are the eigenvalues of H") {
    std::mt19937 rng(2024);
    for (const auto& name : builtin_model_names()) {
      const auto spec = builtin_model(name);
      const Family fam(spec);
      const auto& ev = fam.evaluator();
      for (int trial = 0; trial < 200; ++trial) {
        const auto b = testing::random_point(rng, fam);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(spec.hamiltonian.evaluate(b), Eigen::EigenvaluesOnly);
        const Eigen::VectorXd eig = solver.eigenvalues();
        const double scale = 1.0 + eig.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
          // P vanishes at each eigenvalue, relative to the size of its terms
          const double z = eig(i);
          double size = std::pow(std::abs(z), static_cast<double>(fam.k()));
          const auto a = ev.coefficients(b);  // a_0..a_{k-1}, 1
          for (std::size_t j = 0; j < fam.k(); ++j) size += std::abs(a[j]) * std::pow(std::abs(z), static_cast<double>(j));
          REQUIRE_MESSAGE(std::abs(ev.value(b, z)) <= 1e-12 * (1.0 + size), name);
        }
        // and the root finder reproduces them
        const auto a = ev.coefficients(b);
        auto roots = real_roots(std::span<const double>(a.data(), fam.k()));
        if (fam.k() > 1 && roots.size() == fam.k()) {
          std::sort(roots.begin(), roots.end());
          for (Eigen::Index i = 0; i < eig.size(); ++i) {
            const double gap = eig.size() > 1 ? (eig.tail(eig.size() - 1) - eig.head(eig.size() - 1)).minCoeff() : 1.0;
            if (gap > 1e-3) REQUIRE_MESSAGE(std::abs(roots[static_cast<std::size_t>(i)] - eig(i)) <= 1e-8 * scale, name);
          }
        }
      }
    }
  }

  TEST_CASE("shifted roots sum to zero") {
    std::mt19937 rng(77);
    for (const auto& name : builtin_model_names()) {
      const Family fam(builtin_model(name));
      if (fam.k() < 2) continue;
      for (int trial = 0; trial < 50; ++trial) {
        const auto b = testing::random_point(rng, fam);
        const auto xi = fam.characteristic_map()(b);
        std::vector<double> lower(xi.begin(), xi.end());
        lower.push_back(0.0);
        double sum = 0.0;
        for (const auto& r : monic_roots(lower)) sum += r.real();
        CHECK_MESSAGE(std::abs(sum) <= 1e-9, name);
      }
    }
  }

  TEST_CASE("characteristic map jacobian") {
    const Family fam(builtin_model("gyroid"));
    const auto& xi = fam.characteristic_map();
    CHECK(xi.components() == 3);
    const std::vector<double> b{0.3, 1.1, 2.0};
    const Eigen::MatrixXd j = xi.jacobian(b);
    const double h = 1e-6;
    for (std::size_t c = 0; c < 3; ++c) {
      auto bp = b, bm = b;
      bp[c] += h;
      bm[c] -= h;
      const auto fp = xi(bp), fm = xi(bm);
      for (std::size_t r = 0; r < 3; ++r) {
        CHECK(j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) ==
              doctest::Approx((fp[r] - fm[r]) / (2 * h)).epsilon(1e-6));
      }
    }
  }
}

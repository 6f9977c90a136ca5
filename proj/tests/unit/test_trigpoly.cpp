#include <complex>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "swallowtail/charpoly.hpp"
#include "swallowtail/trigpoly.hpp"

using namespace swallowtail;
using testing::pi;

namespace {

TrigPoly e(Frequency m, GaussianRational c = 1) { return TrigPoly::monomial(std::move(m), c); }

TrigPoly random_poly(std::mt19937& rng, std::size_t dim, int terms) {
  std::uniform_int_distribution<int> freq(-2, 2), num(-5, 5), den(1, 4);
  TrigPoly p(dim);
  for (int t = 0; t < terms; ++t) {
    Frequency m(dim);
    for (auto& x : m) x = freq(rng);
    p.add_term(m, GaussianRational(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng))));
  }
  return p;
}

}  // namespace

TEST_SUITE("trigpoly") {
  TEST_CASE("add") {
    const TrigPoly p = e({1, 0}) + e({0, -1}, 3);
    CHECK(add(p, TrigPoly(2)) == p);

    const TrigPoly c = add(e({1}), e({-1}));
    CHECK(c.terms().size() == 2);
    CHECK(c.coefficient({1}) == GaussianRational(1));
    CHECK(c.coefficient({-1}) == GaussianRational(1));
    CHECK(evaluate_real(c, std::vector<double>{0.4}) == doctest::Approx(2 * std::cos(0.4)));

    // honeycomb a_0 assembled term by term
    TrigPoly a0 = TrigPoly::constant(2, -3);
    for (const Frequency& m : {Frequency{1, 0}, Frequency{0, 1}, Frequency{1, -1}}) {
      Frequency neg = m;
      for (auto& x : neg) x = -x;
      a0 = add(a0, e(m, -1) + e(neg, -1));
    }
    const auto hc = char_poly(builtin_model("honeycomb").hamiltonian);
    CHECK(a0 == hc.coeffs[0]);
  }

  TEST_CASE("add rejects mismatched operands") {
    CHECK_THROWS(add(TrigPoly(2), TrigPoly(3)));
    CHECK_THROWS(add(TrigPoly(2, Backend::torus), TrigPoly(2, Backend::affine)));
  }

  TEST_CASE("mul") {
    const TrigPoly p = e({1, 0}) + e({0, 1}, 2);
    CHECK(mul(p, TrigPoly::constant(2, 1)) == p);
    CHECK(mul(e({1}), e({-1})) == TrigPoly::constant(1, 1));

    const TrigPoly lhs = mul(e({1, 0}) + e({0, 1}), e({-1, 0}) + e({0, -1}));
    const TrigPoly rhs = TrigPoly::constant(2, 2) + e({1, -1}) + e({-1, 1});
    CHECK(lhs == rhs);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> b{u(rng), u(rng)};
      CHECK(evaluate_real(lhs, b) == doctest::Approx(2 + 2 * std::cos(b[0] - b[1])).epsilon(1e-12));
    }
    CHECK_THROWS(mul(TrigPoly(1), TrigPoly(2)));
  }

  TEST_CASE("conjugate") {
    CHECK(conjugate(e({1})) == e({-1}));
    const TrigPoly real = e({1, 2}, GaussianRational(1, 2)) + e({-1, -2}, GaussianRational(1, -2));
    CHECK(is_real_valued(real));
    CHECK(conjugate(real) == real);
    std::mt19937 rng(3);
    const TrigPoly p = random_poly(rng, 2, 6);
    CHECK(conjugate(conjugate(p)) == p);
  }

  TEST_CASE("evaluate") {
    const TrigPoly c = e({1}) + e({-1});
    CHECK(evaluate_real(c, std::vector<double>{0.0}) == doctest::Approx(2.0));

    const auto cp = char_poly(builtin_model("gyroid").hamiltonian);
    CHECK(evaluate_real(cp.coeffs[0], std::vector<double>{0, 0, 0}) == doctest::Approx(-3.0));
    CHECK(std::abs(evaluate_real(cp.coeffs[1], std::vector<double>{pi / 2, pi / 2, pi / 2})) < 1e-14);

    // complex value for non-real polynomials
    const auto v = evaluate(e({1}), std::vector<double>{pi / 2});
    CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(1.0));
    CHECK_THROWS(evaluate_real(e({1}), std::vector<double>{0.3}));
    CHECK_THROWS(evaluate(c, std::vector<double>{0.1, 0.2}));
  }

  TEST_CASE("partial_derivative") {
    const TrigPoly c = e({1}) + e({-1});
    const TrigPoly d = partial_derivative(c, 0);
    CHECK(is_real_valued(d));
    CHECK(evaluate_real(d, std::vector<double>{pi / 2}) == doctest::Approx(-2.0));
    CHECK(partial_derivative(TrigPoly::constant(1, 5), 0).is_zero());

    const auto cp = char_poly(builtin_model("gyroid").hamiltonian);
    CHECK(std::abs(evaluate_real(partial_derivative(cp.coeffs[1], 0), std::vector<double>{0, 0, 0})) < 1e-15);
  }

  TEST_CASE("is_real_valued") {
    CHECK(is_real_valued(e({1}) + e({-1})));
    CHECK_FALSE(is_real_valued(e({1})));
    for (const auto& name : builtin_model_names()) {
      const auto cp = char_poly(builtin_model(name).hamiltonian);
      for (const auto& a : cp.coeffs) CHECK_MESSAGE(is_real_valued(a), name);
    }
  }

  TEST_CASE("affine backend") {
    const TrigPoly x = TrigPoly::monomial({1, 0}, 1, Backend::affine);
    const TrigPoly y = TrigPoly::monomial({0, 1}, 1, Backend::affine);
    const TrigPoly p = mul(x + y, x - y);
    CHECK(evaluate_real(p, std::vector<double>{3, 2}) == doctest::Approx(5.0));
    CHECK(partial_derivative(p, 0) == TrigPoly::monomial({1, 0}, 2, Backend::affine));
  }

  TEST_CASE("serialization round trip") {
    std::mt19937 rng(11);
    const TrigPoly p = random_poly(rng, 3, 8);
    CHECK(trigpoly_from_json(to_json(p)) == p);
    CHECK(render(e({1, 0}) + e({-1, 0}) - TrigPoly::constant(2, 3)) == "-3 + 2cos(a)");
  }

  TEST_CASE("ring axioms and homomorphism") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int trial = 0; trial < 30; ++trial) {
      const TrigPoly p = random_poly(rng, 2, 5), q = random_poly(rng, 2, 5), r = random_poly(rng, 2, 5);
      CHECK(mul(p + q, r) == mul(p, r) + mul(q, r));
      CHECK(mul(p, q) == mul(q, p));
      CHECK(mul(mul(p, q), r) == mul(p, mul(q, r)));
      const std::vector<double> b{u(rng), u(rng)};
      const auto pq = evaluate(mul(p, q), b);
      const auto expect = evaluate(p, b) * evaluate(q, b);
      CHECK(std::abs(pq - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
      CHECK(std::abs(evaluate(conjugate(p), b) - std::conj(evaluate(p, b))) <= 1e-12 * std::max(1.0, std::abs(evaluate(p, b))));
    }
  }

  TEST_CASE("derivatives match finite differences on every model") {
    std::mt19937 rng(99);
    const double h = 1e-5;
    for (const auto& name : builtin_model_names()) {
      const auto cp = char_poly(builtin_model(name).hamiltonian);
      const Family fam(builtin_model(name));
      for (const auto& a : cp.coeffs) {
        if (a.is_constant()) continue;
        for (int trial = 0; trial < 100; ++trial) {
          auto b = testing::random_point(rng, fam);
          for (std::size_t axis = 0; axis < cp.n; ++axis) {
            const double exact = evaluate_real(partial_derivative(a, axis), b);
            auto bp = b, bm = b;
            bp[axis] += h;
            bm[axis] -= h;
            const double fd = (evaluate_real(a, bp) - evaluate_real(a, bm)) / (2 * h);
            const double scale = std::max(1.0, std::abs(evaluate_real(a, b)));
            REQUIRE_MESSAGE(std::abs(exact - fd) <= 1e-6 * scale, name);
          }
        }
      }
    }
  }

  TEST_CASE("compiled jets agree with exact derivatives") {
    const auto cp = char_poly(builtin_model("gyroid").hamiltonian);
    const CompiledPoly c(cp.coeffs[0]);
    const std::vector<double> b{0.3, 1.1, 2.0};
    Jet jet;
    c.eval(b, 3, jet);
    CHECK(jet.value == doctest::Approx(evaluate_real(cp.coeffs[0], b)).epsilon(1e-14));
    for (std::size_t i = 0; i < 3; ++i) {
      const TrigPoly di = partial_derivative(cp.coeffs[0], i);
      CHECK(jet.grad[i] == doctest::Approx(evaluate_real(di, b)).epsilon(1e-13));
      for (std::size_t j = 0; j < 3; ++j) {
        const TrigPoly dij = partial_derivative(di, j);
        CHECK(jet.hess[i * 3 + j] == doctest::Approx(evaluate_real(dij, b)).epsilon(1e-13));
        for (std::size_t l = 0; l < 3; ++l) {
          CHECK(jet.third[(i * 3 + j) * 3 + l] ==
                doctest::Approx(evaluate_real(partial_derivative(dij, l), b)).epsilon(1e-13));
        }
      }
    }
  }
}

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "swallowtail/classifier.hpp"
#include "swallowtail/linalg.hpp"

using namespace swallowtail;
using testing::pi;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  }
  return a;
}

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("hessian_at") {
    const Family gy(builtin_model("gyroid"));
    const double s3 = std::sqrt(3.0);
    const std::vector<double> mid{pi / 2, pi / 2, pi / 2};
    Eigen::MatrixXd expect(4, 4);
    expect << -4, -2, -2, 0, -2, -4, -2, 0, -2, -2, -4, 0, 0, 0, 0, 24;
    CHECK((hessian_at(gy, mid, s3) - expect).cwiseAbs().maxCoeff() < 1e-12);

    const Family tri(builtin_model("triangle"));
    const Eigen::MatrixXd ht = hessian_at(tri, std::vector<double>{0.0}, -1.0);
    CHECK(ht(0, 0) == doctest::Approx(2.0));
    CHECK(ht(1, 1) == doctest::Approx(-6.0));
    CHECK(std::abs(ht(0, 1)) < 1e-14);
    CHECK(ht.determinant() == doctest::Approx(-12.0));

    CHECK(hessian_at(gy, std::vector<double>{0, 0, 0}, -1.0).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("signature") {
    Eigen::MatrixXd gyroid(4, 4);
    gyroid << -4, -2, -2, 0, -2, -4, -2, 0, -2, -2, -4, 0, 0, 0, 0, 24;
    CHECK(signature(gyroid) == Signature{3, 0, 1});
    CHECK(signature(gyroid).pattern() == "(---+)");

    const Family hc(builtin_model("honeycomb"));
    const auto h = hessian_at(hc, std::vector<double>{2 * pi / 3, -2 * pi / 3}, 0.0);
    CHECK(signature(h) == Signature{2, 0, 1});

    CHECK(signature(Eigen::MatrixXd::Zero(4, 4)) == Signature{0, 4, 0});
    CHECK(is_dirac_signature({1, 0, 3}));
    CHECK(is_dirac_signature({3, 0, 1}));
    CHECK_FALSE(is_dirac_signature({2, 0, 2}));
    CHECK_FALSE(is_dirac_signature({2, 1, 1}));
  }

  TEST_CASE("classify") {
    const Family gy(builtin_model("gyroid"));
    for (double z : {std::sqrt(3.0), -std::sqrt(3.0)}) {
      const auto pc = classify(gy, std::vector<double>{pi / 2, pi / 2, pi / 2}, z);
      CHECK(pc.classification == Classification::dirac);
      CHECK(pc.tilt_free);
      CHECK(pc.fiber_consistent);
      CHECK(pc.fiber.stratum.parts == std::vector<int>{1, 1});
    }
    const auto cusp = classify(gy, std::vector<double>{0, 0, 0}, -1.0);
    CHECK(cusp.classification == Classification::degenerate);
    CHECK(cusp.fiber.stratum.parts == std::vector<int>{2});

    const Family ab(builtin_model("triangle_ab"));
    const auto lo = classify(ab, std::vector<double>{pi / 3, -pi / 3}, -1.0);
    CHECK(lo.classification == Classification::dirac);
    CHECK_FALSE(lo.tilt_free);
    CHECK(lo.signature.pattern() == "(-++)");
    const auto hi = classify(ab, std::vector<double>{2 * pi / 3, -2 * pi / 3}, 1.0);
    CHECK(hi.classification == Classification::dirac);
    CHECK_FALSE(hi.tilt_free);
    CHECK(hi.signature.pattern() == "(--+)");

    const Family v(builtin_model("vnw3"));
    const auto origin = classify(v, std::vector<double>{0, 0, 0}, 0.0);
    CHECK(origin.classification == Classification::dirac);
    CHECK(origin.signature == Signature{3, 0, 1});

    CHECK(to_string(Classification::morse_other_signature) == "morse-other");
    CHECK(classification_from_string("degenerate") == Classification::degenerate);
    CHECK_THROWS(classification_from_string("cone"));
  }

  TEST_CASE("diagonal_spectrum") {
    const Family gy(builtin_model("gyroid"));
    const std::vector<double> a{0.0, pi / 2, pi};
    const auto rows = diagonal_spectrum(gy, a);
    REQUIRE(rows.size() == 3);
    const double s3 = std::sqrt(3.0);
    const std::vector<std::vector<double>> expect{{-1, -1, -1, 3}, {-s3, -s3, s3, s3}, {-3, 1, 1, 1}};
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(rows[r].numeric[i] == doctest::Approx(expect[r][i]).epsilon(1e-9));
        CHECK(rows[r].closed_form[i] == doctest::Approx(expect[r][i]).epsilon(1e-12));
      }
      CHECK(rows[r].max_deviation < 1e-9);
    }
    CHECK_THROWS(diagonal_spectrum(Family(builtin_model("honeycomb")), a));
  }

  TEST_CASE("jacobi eigensolver reconstructs") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXd a = random_symmetric(rng, 5);
      const auto eig = jacobi_eigen(a);
      const Eigen::MatrixXd back = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
      CHECK((back - a).cwiseAbs().maxCoeff() <= 1e-10 * a.cwiseAbs().maxCoeff());
      for (Eigen::Index i = 1; i < eig.values.size(); ++i) CHECK(eig.values(i - 1) <= eig.values(i));
    }
  }

  TEST_CASE("signature is invariant under congruence") {
    std::mt19937 rng(57);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> pick(0, 2);
    int checked = 0;
    while (checked < 100) {
      // diagonal with a known inertia, conjugated to a dense matrix
      Eigen::VectorXd d(5);
      Signature want;
      for (Eigen::Index i = 0; i < 5; ++i) {
        const int kind = pick(rng);
        d(i) = kind == 0 ? -(1.0 + std::abs(g(rng))) : kind == 1 ? 0.0 : 1.0 + std::abs(g(rng));
        (kind == 0 ? want.minus : kind == 1 ? want.zero : want.plus) += 1;
      }
      Eigen::MatrixXd q = Eigen::MatrixXd::Identity(5, 5);
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) q(i, j) += 0.3 * g(rng);
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
      const double cond = svd.singularValues()(0) / svd.singularValues()(4);
      if (cond > 20) continue;
      const Eigen::MatrixXd m = q * d.asDiagonal() * q.transpose();
      CHECK(signature(m, 1e-9, 1e-10) == want);
      ++checked;
    }
  }

  TEST_CASE("numerical_rank") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 2, 4, 6;
    CHECK(numerical_rank(m, 1e-9, 1e-12) == 1);
    CHECK(numerical_rank(Eigen::MatrixXd::Zero(2, 2), 1e-9, 1e-12) == 0);
    CHECK(numerical_rank(Eigen::MatrixXd::Identity(3, 3), 1e-9, 1e-12) == 3);
  }
}

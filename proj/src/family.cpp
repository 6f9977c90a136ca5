#include "swallowtail/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "swallowtail/linalg.hpp"

namespace swallowtail {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double circle_distance(double x, double y) {
  double d = std::fmod(std::abs(x - y), kTwoPi);
  return std::min(d, kTwoPi - d);
}

Family::Family(const ModelSpec& model)
    : Family(model.name, traceless_shift(swallowtail::char_poly(model.hamiltonian)), model.variables, model.box) {
  hamiltonian_ = model.hamiltonian;
  curves_ = model.curves;
}

Family::Family(std::string name, CharPolyFamily cp, std::vector<std::string> variables, std::pair<double, double> box)
    : name_(std::move(name)),
      cp_(cp.is_shifted ? std::move(cp) : traceless_shift(std::move(cp))),
      evaluator_(cp_),
      xi_(cp_),
      variables_(std::move(variables)),
      box_(box) {
  if (variables_.empty()) variables_ = default_variable_names(cp_.n);
}

std::pair<double, double> Family::domain() const {
  return periodic() ? std::pair<double, double>{0.0, kTwoPi} : box_;
}

std::vector<double> Family::grid_axis(int grid) const {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  const auto [lo, hi] = domain();
  std::vector<double> axis(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    if (periodic()) {
      axis[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / grid;
    } else {
      axis[static_cast<std::size_t>(i)] = grid == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (grid - 1);
    }
  }
  return axis;
}

double Family::grid_spacing(int grid) const {
  const auto [lo, hi] = domain();
  return (hi - lo) / std::max(1, periodic() ? grid : grid - 1);
}

std::vector<double> Family::spectrum(std::span<const double> b) const {
  if (hamiltonian_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian_->evaluate(b), Eigen::EigenvaluesOnly);
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    return out;
  }
  const auto a = evaluator_.coefficients(b);
  return real_roots(std::span<const double>(a.data(), cp_.k));
}

StratumResult Family::fiber_stratum(std::span<const double> b, double tol) const {
  if (hamiltonian_ || cp_.k < 2) return stratum_from_roots(spectrum(b), tol);
  const auto xi = xi_(b);
  StratumResult s = stratum_of(xi, cp_.k, tol);
  // Undo the traceless shift so cluster values are energies of P itself.
  const double shift = CompiledPoly(cp_.shift).value(b);
  for (auto& c : s.clusters) c.value -= shift;
  return s;
}

std::vector<double> Family::canonical(std::vector<double> b) const {
  if (!periodic()) return b;
  for (double& x : b) {
    x = std::fmod(x, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    if (x >= kTwoPi) x -= kTwoPi;
  }
  return b;
}

double Family::base_distance(std::span<const double> b, std::span<const double> c) const {
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    d = std::max(d, periodic() ? circle_distance(b[i], c[i]) : std::abs(b[i] - c[i]));
  }
  return d;
}

int jacobian_rank(const CharacteristicMap& xi, std::span<const double> b, double rel_tol, double abs_floor) {
  return numerical_rank(xi.jacobian(b), rel_tol, abs_floor);
}

int maximal_jacobian_rank(const CharacteristicMap& xi) {
  int varying = 0;
  for (const auto& c : xi.symbolic()) varying += c.is_constant() ? 0 : 1;
  return std::min(varying, static_cast<int>(xi.n()));
}

}  // namespace swallowtail

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swallowtail/charpoly.hpp"
#include "swallowtail/graph_model.hpp"
#include "swallowtail/singularity.hpp"

namespace swallowtail {

/// Everything the numeric stages need about one model: the exact shifted
/// characteristic polynomial, its evaluators, and H itself when known.
class Family {
 public:
  explicit Family(const ModelSpec& model);
  /// Bare polynomial family with no Hamiltonian attached.
  Family(std::string name, CharPolyFamily cp, std::vector<std::string> variables,
         std::pair<double, double> box = {-1.0, 1.0});

  const std::string& name() const { return name_; }
  std::size_t k() const { return cp_.k; }
  std::size_t n() const { return cp_.n; }
  Backend backend() const { return cp_.backend; }
  bool periodic() const { return cp_.backend == Backend::torus; }
  const CharPolyFamily& char_poly() const { return cp_; }
  const FamilyEvaluator& evaluator() const { return evaluator_; }
  const CharacteristicMap& characteristic_map() const { return xi_; }
  const std::optional<HamiltonianFamily>& hamiltonian() const { return hamiltonian_; }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<BoundaryCurve>& curves() const { return curves_; }
  /// Sampling domain per axis: [0, 2pi) on the torus, the model box otherwise.
  std::pair<double, double> domain() const;
  /// G sample coordinates per axis: i * 2pi / G on the torus, G points
  /// spanning the box (endpoints included) otherwise.
  std::vector<double> grid_axis(int grid) const;
  /// Distance between neighbouring grid coordinates.
  double grid_spacing(int grid) const;

  /// Sorted real spectrum at b: eigenvalues of H(b) when H is known,
  /// otherwise the real roots of P(b, .).
  std::vector<double> spectrum(std::span<const double> b) const;
  StratumResult fiber_stratum(std::span<const double> b, double tol) const;

  /// Reduce periodic coordinates into [0, 2pi).
  std::vector<double> canonical(std::vector<double> b) const;
  /// max_i d(b_i, c_i) with circle distance on periodic axes.
  double base_distance(std::span<const double> b, std::span<const double> c) const;

 private:
  std::string name_;
  CharPolyFamily cp_;
  FamilyEvaluator evaluator_;
  CharacteristicMap xi_;
  std::optional<HamiltonianFamily> hamiltonian_;
  std::vector<std::string> variables_;
  std::vector<BoundaryCurve> curves_;
  std::pair<double, double> box_;
};

double circle_distance(double x, double y);

/// Numerical rank of the (k-1) x n Jacobian of the characteristic map;
/// singular values above max(rel_tol * sigma_max, abs_floor) count.
int jacobian_rank(const CharacteristicMap& xi, std::span<const double> b, double rel_tol = 1e-6,
                  double abs_floor = 1e-7);

/// min(#non-constant components, n): the generic rank of the map.
int maximal_jacobian_rank(const CharacteristicMap& xi);

}  // namespace swallowtail

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "swallowtail/family.hpp"
#include "swallowtail/graph_model.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline std::vector<double> random_point(std::mt19937& rng, const swallowtail::Family& f) {
  const auto [lo, hi] = f.domain();
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> b(f.n());
  for (auto& x : b) x = u(rng);
  return b;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace testing

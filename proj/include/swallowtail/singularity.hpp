#pragma once

// Discriminant and root-multiplicity strata of the miniversal unfolding
// F(z) = z^k + l_{k-2} z^{k-2} + ... + l_0 of the A_{k-1} singularity.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace swallowtail {

/// disc(F) = (-1)^{k(k-1)/2} Res(F, F') for monic F. On the gyroid slice
/// l_2 = -6 this equals the published sextic in (l_0, l_1) times this
/// constant; the value is asserted in the tests.
inline constexpr long kSliceDiscriminantNormalization = 1;

/// lambda = (l_0, ..., l_{k-2}); Sylvester determinant by partially pivoted
/// LU in extended precision. Throws std::invalid_argument for k < 2.
double discriminant(std::span<const double> lambda, std::size_t k);

/// Same determinant in exact rational arithmetic.
mpq_class discriminant_exact(std::span<const mpq_class> lambda, std::size_t k);

/// 20736 a0 - 4608 a0^2 + 256 a0^3 + 864 a1^2 - 864 a0 a1^2 - 27 a1^4
double a3_slice_closed_form(double a0, double a1);

/// Magnitude reference for disc: prod_{i<j} (1 + |r_i| + |r_j|)^2.
double discriminant_scale(std::span<const double> roots);

/// Multiset (A_{n_1}, ..., A_{n_l}); empty means a nonsingular fiber.
struct Stratum {
  std::vector<int> parts;  // ascending

  bool empty() const { return parts.empty(); }
  std::string label() const;
  friend bool operator==(const Stratum&, const Stratum&) = default;
};

struct RootCluster {
  double value = 0.0;
  int multiplicity = 1;
};

struct StratumResult {
  Stratum stratum;
  std::vector<RootCluster> clusters;  // ascending by value
};

/// All complex roots of z^k + sum c_j z^j (c = c_0..c_{k-1}) via companion
/// matrix eigenvalues.
std::vector<std::complex<double>> monic_roots(std::span<const double> lower_coeffs);

/// Real roots of z^k + sum c_j z^j, each polished by Newton on the polynomial.
/// Throws std::domain_error when a root is not real within tolerance.
std::vector<double> real_roots(std::span<const double> lower_coeffs, double tol = 1e-6);

/// Roots of the unfolding F at lambda, clustered with the scale-aware
/// tolerance tol * (1 + max|root|). Throws std::domain_error when F has
/// complex roots beyond the tolerance (lambda outside any Hermitian region).
StratumResult stratum_of(std::span<const double> lambda, std::size_t k, double tol = 1e-6);

/// Clustering of already-known real roots, e.g. eigenvalues of H(b).
StratumResult stratum_from_roots(std::vector<double> roots, double tol = 1e-6);

/// sum n_i <= k - l
bool grothendieck_valid(const Stratum& s, std::size_t k);

}  // namespace swallowtail

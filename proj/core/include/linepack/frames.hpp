#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string_view>

namespace linepack {

using Complex = std::complex<double>;
using Index = Eigen::Index;

enum class Field { Real, Complex };

std::string_view to_string(Field field);
// Accepts "real"/"R" and "complex"/"C" (case-insensitive). Throws DomainError otherwise.
Field parse_field(std::string_view text);

inline constexpr double kDefaultUnitTol = 1e-8;
inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultTightTol = 1e-8;

/// A d x n array of scalars whose columns are the vectors of a configuration.
///
/// Entries are always stored as complex numbers; a Real configuration has
/// identically zero imaginary parts and differs from a Complex one only in
/// which bounds and polynomials apply to it. Values are immutable once built.
class VectorConfiguration {
 public:
  VectorConfiguration(Field field, Eigen::MatrixXcd entries, double tol_unit = kDefaultUnitTol);

  static VectorConfiguration real(const Eigen::MatrixXd& entries, double tol_unit = kDefaultUnitTol);

  Field field() const noexcept { return field_; }
  Index dim() const noexcept { return entries_.rows(); }
  Index size() const noexcept { return entries_.cols(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }
  double tol_unit() const noexcept { return tol_unit_; }

  double column_norm(Index j) const { return entries_.col(j).norm(); }
  // True when every column norm is within tol_unit() of 1.
  bool unit_norm() const;
  double max_unit_deviation() const;

 private:
  Field field_;
  Eigen::MatrixXcd entries_;
  double tol_unit_;
};

/// Gram matrix G = X^* X together with the statistics used throughout the
/// library. G(i, j) = <x_j, x_i> = x_i^* x_j.
struct GramReport {
  Eigen::MatrixXcd gram;
  double coherence = 0.0;           // max_{i<j} |G_ij|, 0 when n == 1
  double one_norm = 0.0;            // sum_{ij} |G_ij|
  double tightness_residual = 0.0;  // ||X X^* - (n/d) I||_F
  double equiangular_spread = 0.0;  // max - min of |G_ij| over i<j, 0 when n == 1
  double trace = 0.0;
};

GramReport gram_report(const VectorConfiguration& x);

struct TightnessCheck {
  bool tight;
  double residual;
};

struct EquiangularityCheck {
  bool equiangular;
  double spread;
};

// ||X X^* - (n/d) I||_F <= tol. Throws DomainError when tol <= 0.
TightnessCheck is_tight(const VectorConfiguration& x, double tol);

// Requires n >= 2 (DimensionError) and unit-norm columns (DomainError).
EquiangularityCheck is_equiangular(const VectorConfiguration& x, double tol);

bool is_etf(const VectorConfiguration& x, double tol);

/// Returns Y in T(n - d, n) with X Y^* = 0: the rows of Y are an orthonormal
/// basis of the orthogonal complement of the row space of X, scaled by
/// sqrt(n / k). Y is determined only up to a left unitary factor.
///
/// Throws DimensionError when n <= d and RankDeficient when the d-th singular
/// value of X is at most rank_tol.
VectorConfiguration orthogonal_tight_complement(const VectorConfiguration& x,
                                                double rank_tol = kDefaultRankTol);

/// Naimark complement of a unit-norm tight frame: the unit-norm Y in T(n-d, n)
/// with Y^* Y = (n/k)(I - (d/n) X^* X), so <y_i, y_j> = -(d/k) <x_i, x_j> off the diagonal.
VectorConfiguration naimark_complement(const VectorConfiguration& x,
                                       double tight_tol = kDefaultTightTol);

// d + 1 unit vectors in dimension d with all |<x_i, x_j>| = 1/d (centred simplex).
VectorConfiguration construct_simplex_etf(int d, Field field = Field::Real);

// k^2 unit vectors in C^k with |<z_i, z_j>|^2 = 1/(k+1). Only k = 2 and k = 3 (Hesse).
VectorConfiguration construct_sic(int k);

// [Z | Z | ... | Z] with m copies.
VectorConfiguration concat_copies(const VectorConfiguration& z, int m);

// Seeded Gaussian configuration of n columns in F^d, optionally normalized.
VectorConfiguration random_configuration(int d, int n, Field field, std::uint64_t seed,
                                         bool unit = true);

}  // namespace linepack

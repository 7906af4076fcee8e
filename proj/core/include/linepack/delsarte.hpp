#pragma once

#include "linepack/errors.hpp"
#include "linepack/frames.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace linepack {

/// The degree <= 2 zonal polynomials in x = |<z, w>|^2 used by the LP bound:
///
///   Q0(x) = 1
///   Q1(x) = x - 1/k
///   Q2(x) = x^2 - a x + b
///
/// with (a, b) = (4/(k+2), 2/((k+1)(k+2))) over C^k and
/// (a, b) = (6/(k+4), 3/((k+2)(k+4))) over R^k.
struct PolynomialTriple {
  Field field = Field::Complex;
  int k = 1;
  double q1_const = 0.0;  // -1/k
  double q2_lin = 0.0;    // a
  double q2_const = 0.0;  // b

  double q0(double) const { return 1.0; }
  double q1(double x) const { return x + q1_const; }
  double q2(double x) const { return x * x - q2_lin * x + q2_const; }
  double q2_prime(double x) const { return 2.0 * x - q2_lin; }
};

PolynomialTriple q_polys(int k, Field field);

struct LpCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

// f(x) = c0 Q0(x) + c1 Q1(x) + c2 Q2(x) and its derivative.
double surrogate(const PolynomialTriple& q, const LpCoefficients& c, double x);
double surrogate_prime(const PolynomialTriple& q, const LpCoefficients& c, double x);

// Abscissa where the surrogate is made tangent to sqrt(x): 1/(k+1) over C, 1/(k+2) over R.
double tangency_abscissa(int k, Field field);

struct ConstraintCheck {
  std::string name;
  bool satisfied = false;
  double margin = 0.0;
};

struct FeasibilityCertificate {
  int grid_size = 0;          // number of distinct abscissae checked
  double min_slack = 0.0;     // min over the grid of f(x) - sqrt(x)
  double argmin_x = 0.0;
  std::vector<ConstraintCheck> checked_constraints;
  bool passed = false;
};

class InfeasibleTriple : public Error {
 public:
  explicit InfeasibleTriple(FeasibilityCertificate certificate)
      : Error("LP coefficients fail the feasibility certificate"),
        certificate_(std::move(certificate)) {}
  const FeasibilityCertificate& certificate() const noexcept { return certificate_; }

 private:
  FeasibilityCertificate certificate_;
};

enum class LpSource { Tangency, Minimized };

struct LPSolution {
  Field field = Field::Complex;
  int k = 1;
  LpCoefficients coeffs;
  double x_star = 0.0;
  LpSource source = LpSource::Tangency;
  FeasibilityCertificate feasibility;
  int refinement_rounds = 0;  // minimized solutions only
};

inline constexpr int kDefaultLpGrid = 4097;
inline constexpr int kDefaultVerifyGrid = 32769;
inline constexpr double kSlackTol = 1e-9;
inline constexpr double kBoxTol = 1e-12;

// size points x_j = (1 - cos(pi j / (size - 1))) / 2, sorted, covering 0 and 1.
std::vector<double> chebyshev_grid(int size);

/// Checks 0 <= c1 <= k c0 and c2 <= 0 exactly, and f(x) >= sqrt(x) on a
/// Chebyshev grid of grid_size points augmented with {0, x*, 1}. Passes when
/// the minimum slack is >= -1e-9 and every box margin is >= -1e-12.
FeasibilityCertificate verify_feasible(const LpCoefficients& c, int k, Field field,
                                       int grid_size = kDefaultVerifyGrid);

/// Solves f(x*) = sqrt(x*), f(1) = 1, f'(x*) = 1 / (2 sqrt(x*)).
/// Throws SingularSystem or InfeasibleTriple.
LPSolution tangency_solve(int k, Field field, int verify_grid = kDefaultLpGrid);

// Memoized tangency_solve; safe for concurrent callers.
LPSolution tangency_cached(int k, Field field);

/// Discretized LP: minimize c0 subject to f(x_g) >= sqrt(x_g) on a Chebyshev
/// grid, 0 <= c1 <= k c0, c2 <= 0. The result is re-verified on a grid eight
/// times finer; violated local minima are added as cuts for up to three rounds.
LPSolution minimize_c0(int k, Field field, int grid_size = kDefaultLpGrid);

/// Closed-form complex coefficients as they are usually quoted. The quoted c2
/// expression is positive; the tangency system produces its negation.
struct ClosedFormTriple {
  double c0;
  double c1;
  double c2_quoted;
};
ClosedFormTriple closed_form_triple(int k);

// Upper bound on ||Y^* Y||_1 for Y in T(k, n) via two Cauchy-Schwarz steps:
// n + sqrt(n (n - 1) (n^2 / k - n)). Throws DimensionError when n < k.
double gram_one_norm_bound_welch(int k, int n);

// Upper bound c0 n^2 from the LP; over C this is n^2 (1 + (k - 1) sqrt(1 + k)) / k^2.
double gram_one_norm_bound_bc(int k, int n, Field field);

// n / (gamma_upper - n). Throws DomainError when gamma_upper <= n.
double lemma_coherence_floor(int n, double gamma_upper);

struct GammaInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::string witness;  // name of the construction that produced `lower`
};

inline constexpr std::uint64_t kDefaultWitnessSeed = 0x6c696e65u;

/// Bracket on gamma(k, n) = max ||Y^* Y||_1 over T(k, n). The upper end is the
/// better of the two Gram bounds; the lower end is the best built-in witness.
GammaInterval gamma_interval(int k, int n, Field field,
                             std::uint64_t seed = kDefaultWitnessSeed);

/// sum_{ij} Q2(|<z_i, z_j>|^2) w_i w_j over the normalized columns of z, with
/// the Q2 of z's field and k = z.dim(). Zero columns are skipped.
double q2_kernel_energy(const VectorConfiguration& z, std::span<const double> weights);

struct FirstMomentTerms {
  double weighted_q1 = 0.0;  // sum_{ij} Q1(|<z_i, z_j>|^2) ||y_i|| ||y_j||
  double s = 0.0;            // (sum_i ||y_i||)^2
};

// Left side of the degree-one bound (n^2 - S) / k for a configuration y.
FirstMomentTerms first_moment_terms(const VectorConfiguration& y);

}  // namespace linepack

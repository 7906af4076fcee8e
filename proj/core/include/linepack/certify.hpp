#pragma once

#include "linepack/frames.hpp"

#include <optional>
#include <string>
#include <vector>

namespace linepack {

// One inequality `left <= right` (or identity `left == right`) replayed numerically.
struct ChainStep {
  std::string name;
  double left = 0.0;
  double right = 0.0;
  double slack = 0.0;  // right - left, or -|left - right| for identities
  int witness_index = -1;  // column attaining the worst slack for per-column steps
};

inline constexpr double kChainTol = 1e-8;

/// Numerical replay of the coherence/Gram duality: for unit-norm X in
/// N(d, n) and a tight complement Y in T(n - d, n) with X Y^* = 0,
///
///   mu(X) >= n / (||Y^* Y||_1 - n) >= n / (gamma_upper - n).
struct LemmaCertificate {
  int n = 0;
  int d = 0;
  int k = 0;
  double mu = 0.0;
  double gamma_witness = 0.0;  // ||Y^* Y||_1
  double gamma_upper = 0.0;    // best available upper bound on gamma(k, n)
  double floor_witness = 0.0;
  double floor_theorem = 0.0;
  std::vector<ChainStep> chain;
  bool valid = false;
};

LemmaCertificate lemma_certificate(const VectorConfiguration& x);

struct ConditionCheck {
  std::string name;
  bool holds = false;
  double margin = 0.0;
  std::string note;
};

struct EqualityDiagnosis {
  std::vector<ConditionCheck> conditions;
  int skipped_pairs = 0;
  double gram_one_norm = 0.0;
  double reference_bound = 0.0;

  bool all_hold() const;
  // Throws std::out_of_range for unknown names.
  const ConditionCheck& at(const std::string& name) const;
};

inline constexpr double kSignDeadZone = 1e-12;

/// Conditions under which X attains the coherence floor: equiangularity of X,
/// (i) the gap from ||Y^* Y||_1 to the best upper bound on gamma, (ii) X Y^* = 0,
/// (iii) sgn<x_i, x_j> = -sgn<y_i, y_j> with sgn z = z / |z|. Pairs where either
/// product is below 1e-12 in modulus are skipped and counted.
EqualityDiagnosis diagnose_lemma_equality(const VectorConfiguration& x,
                                          const VectorConfiguration& y, double tol);

/// The four equality conditions of the LP Gram bound for a tight Y:
///   (1) |<y_i, z_j>| = |<z_i, y_j>|
///   (2) f(|<z_i, z_j>|^2) = |<z_i, z_j>|
///   (3) sum_{ij} Q2(|<z_i, z_j>|^2) ||y_i|| ||y_j|| = 0
///   (4) ||y_i|| = 1
/// where z_i = y_i / ||y_i|| and f is the field's tangency surrogate.
EqualityDiagnosis diagnose_theorem3_equality(const VectorConfiguration& y, double tol);

struct WelchEqualityCheck {
  bool equal = false;        // ||Y^* Y||_1 within tol of the Welch Gram bound
  bool etf = false;          // unit-norm and equiangular (tightness is a precondition)
  bool consistent = false;   // equal == etf
  double one_norm = 0.0;
  double bound = 0.0;
  double norm_margin = 0.0;  // |one_norm - bound|
  double spread = 0.0;
  double unit_deviation = 0.0;
};

WelchEqualityCheck welch_equality_check(const VectorConfiguration& y, double tol);

}  // namespace linepack

#pragma once

#include "linepack/frames.hpp"

#include <optional>
#include <string_view>

namespace linepack {

// Strict: the bound applies once n > threshold. Inclusive: once n >= threshold.
enum class ThresholdConvention { Strict, Inclusive };

// sqrt((n - d) / (d (n - 1))). Field independent. DimensionError unless n > d >= 1.
double welch_bound(int d, int n);

/// Over C the closed form (n-d)^2 / (n + (n^2 - nd - n) sqrt(1 + n - d) - (n-d)^2).
/// Over R there is no closed form; the bound is n / (c0 n^2 - n) with c0 from
/// the real tangency triple at k = n - d.
double bukh_cox_bound(int d, int n, Field field);

// 1/sqrt(d) once n exceeds d(d+1)/2 (real) or d^2 (complex).
std::optional<double> orthoplex_bound(int d, int n, Field field,
                                      ThresholdConvention convention = ThresholdConvention::Strict);

// Square root of the Levenshtein right-hand side when it is positive.
std::optional<double> levenshtein_bound(int d, int n, Field field);

// Maximum number of equiangular lines: d^2 over C, d(d+1)/2 over R.
long long gerzon_max(int d, Field field);

enum class BoundKind { BukhCox, Welch, Levenshtein, Orthoplex };
std::string_view to_string(BoundKind kind);

struct BoundReport {
  int d = 0;
  int n = 0;
  Field field = Field::Real;
  std::optional<double> welch;
  double bukh_cox = 0.0;
  std::optional<double> orthoplex;
  std::optional<double> levenshtein;
  double best = 0.0;
  BoundKind achiever = BoundKind::BukhCox;
};

// Values closer than this count as a tie and go to the earlier kind in
// BukhCox, Welch, Levenshtein, Orthoplex order.
inline constexpr double kBoundTieTol = 1e-12;

BoundReport bound_report(int d, int n, Field field,
                         ThresholdConvention orthoplex_convention = ThresholdConvention::Strict);

}  // namespace linepack

#include "linepack/bounds.hpp"

#include "linepack/delsarte.hpp"
#include "linepack/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace linepack {

namespace {

void require_overcomplete(int d, int n) {
  if (d < 1 || n <= d) {
    throw DimensionError("bound needs n > d >= 1 (got d=" + std::to_string(d) +
                         ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

double welch_bound(int d, int n) {
  require_overcomplete(d, n);
  const double dd = d;
  const double nd = n;
  return std::sqrt((nd - dd) / (dd * (nd - 1.0)));
}

double bukh_cox_bound(int d, int n, Field field) {
  require_overcomplete(d, n);
  const double nd = n;
  if (field == Field::Complex) {
    const double k = n - d;
    return k * k / (nd + (nd * nd - nd * d - nd) * std::sqrt(1.0 + k) - k * k);
  }
  const double c0 = tangency_cached(n - d, field).coeffs.c0;
  return nd / (c0 * nd * nd - nd);
}

std::optional<double> orthoplex_bound(int d, int n, Field field, ThresholdConvention convention) {
  require_overcomplete(d, n);
  const long long threshold = gerzon_max(d, field);
  const bool applies = convention == ThresholdConvention::Strict ? n > threshold : n >= threshold;
  if (!applies) return std::nullopt;
  return 1.0 / std::sqrt(static_cast<double>(d));
}

std::optional<double> levenshtein_bound(int d, int n, Field field) {
  require_overcomplete(d, n);
  const double dd = d;
  const double nd = n;
  const double rhs = field == Field::Real
                         ? (3.0 * nd - dd * dd - 2.0 * dd) / ((nd - dd) * (dd + 2.0))
                         : (2.0 * nd - dd * dd - dd) / ((nd - dd) * (dd + 1.0));
  if (!(rhs > 0.0)) return std::nullopt;
  return std::sqrt(rhs);
}

long long gerzon_max(int d, Field field) {
  if (d < 1) throw DimensionError("Gerzon bound needs d >= 1");
  const long long dl = d;
  return field == Field::Complex ? dl * dl : dl * (dl + 1) / 2;
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::BukhCox: return "bukh_cox";
    case BoundKind::Welch: return "welch";
    case BoundKind::Levenshtein: return "levenshtein";
    case BoundKind::Orthoplex: return "orthoplex";
  }
  return "unknown";
}

BoundReport bound_report(int d, int n, Field field, ThresholdConvention orthoplex_convention) {
  require_overcomplete(d, n);
  BoundReport r;
  r.d = d;
  r.n = n;
  r.field = field;
  r.welch = welch_bound(d, n);
  r.bukh_cox = bukh_cox_bound(d, n, field);
  r.orthoplex = orthoplex_bound(d, n, field, orthoplex_convention);
  r.levenshtein = levenshtein_bound(d, n, field);

  const std::array<std::pair<BoundKind, std::optional<double>>, 4> ordered{{
      {BoundKind::BukhCox, r.bukh_cox},
      {BoundKind::Welch, r.welch},
      {BoundKind::Levenshtein, r.levenshtein},
      {BoundKind::Orthoplex, r.orthoplex},
  }};
  r.best = r.bukh_cox;
  r.achiever = BoundKind::BukhCox;
  for (const auto& [kind, value] : ordered) {
    if (value && *value > r.best + kBoundTieTol) {
      r.best = *value;
      r.achiever = kind;
    }
  }
  return r;
}

}  // namespace linepack

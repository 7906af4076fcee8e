#include "linepack/delsarte.hpp"

#include "linepack/small_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <utility>

namespace linepack {

PolynomialTriple q_polys(int k, Field field) {
  if (k < 1) throw DimensionError("polynomials need k >= 1");
  const double kd = k;
  PolynomialTriple q;
  q.field = field;
  q.k = k;
  q.q1_const = -1.0 / kd;
  if (field == Field::Complex) {
    q.q2_lin = 4.0 / (kd + 2.0);
    q.q2_const = 2.0 / ((kd + 1.0) * (kd + 2.0));
  } else {
    q.q2_lin = 6.0 / (kd + 4.0);
    q.q2_const = 3.0 / ((kd + 2.0) * (kd + 4.0));
  }
  return q;
}

double surrogate(const PolynomialTriple& q, const LpCoefficients& c, double x) {
  return c.c0 * q.q0(x) + c.c1 * q.q1(x) + c.c2 * q.q2(x);
}

double surrogate_prime(const PolynomialTriple& q, const LpCoefficients& c, double x) {
  return c.c1 + c.c2 * q.q2_prime(x);
}

double tangency_abscissa(int k, Field field) {
  if (k < 1) throw DimensionError("tangency needs k >= 1");
  return 1.0 / (k + (field == Field::Complex ? 1.0 : 2.0));
}

std::vector<double> chebyshev_grid(int size) {
  if (size < 2) throw DomainError("grid needs at least two points");
  std::vector<double> grid(static_cast<std::size_t>(size));
  const double step = std::numbers::pi / (size - 1);
  for (int j = 0; j < size; ++j) grid[j] = 0.5 * (1.0 - std::cos(step * j));
  grid.front() = 0.0;
  grid.back() = 1.0;
  return grid;
}

namespace {

std::vector<double> certificate_grid(int grid_size, double x_star) {
  auto grid = chebyshev_grid(grid_size);
  grid.push_back(x_star);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

constexpr int kCutPatchLevels = 10;
// Residual violation after the last round that is absorbed by raising c0.
constexpr double kFinalLiftTol = 1e-4;

double slack(const PolynomialTriple& q, const LpCoefficients& c, double x) {
  return surrogate(q, c, x) - std::sqrt(x);
}

// Golden-section minimum of the slack on [lo, hi].
double refine_minimum(const PolynomialTriple& q, const LpCoefficients& c, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = slack(q, c, x1);
  double f2 = slack(q, c, x2);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = slack(q, c, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = slack(q, c, x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

FeasibilityCertificate verify_feasible(const LpCoefficients& c, int k, Field field,
                                       int grid_size) {
  if (grid_size < 3) throw DomainError("feasibility grid needs at least 3 points");
  const auto q = q_polys(k, field);
  const auto grid = certificate_grid(grid_size, tangency_abscissa(k, field));

  FeasibilityCertificate cert;
  cert.grid_size = static_cast<int>(grid.size());
  cert.min_slack = slack(q, c, grid.front());
  cert.argmin_x = grid.front();
  for (double x : grid) {
    const double s = slack(q, c, x);
    if (s < cert.min_slack) {
      cert.min_slack = s;
      cert.argmin_x = x;
    }
  }

  const double kd = k;
  cert.checked_constraints = {
      {"c1 >= 0", c.c1 >= -kBoxTol, c.c1},
      {"c1 <= k*c0", kd * c.c0 - c.c1 >= -kBoxTol, kd * c.c0 - c.c1},
      {"c2 <= 0", -c.c2 >= -kBoxTol, -c.c2},
      {"f(x) >= sqrt(x)", cert.min_slack >= -kSlackTol, cert.min_slack},
  };
  cert.passed = std::all_of(cert.checked_constraints.begin(), cert.checked_constraints.end(),
                            [](const ConstraintCheck& cc) { return cc.satisfied; });
  return cert;
}

LPSolution tangency_solve(int k, Field field, int verify_grid) {
  const auto q = q_polys(k, field);
  const double xs = tangency_abscissa(k, field);
  const double root = std::sqrt(xs);

  Eigen::Matrix3d system;
  system << 1.0, q.q1(xs), q.q2(xs),
            1.0, q.q1(1.0), q.q2(1.0),
            0.0, 1.0, q.q2_prime(xs);
  const Eigen::Vector3d target(root, 1.0, 0.5 / root);

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(system);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 1e-12 * sv(0))) {
    throw SingularSystem("tangency system is singular for k=" + std::to_string(k));
  }
  const Eigen::Vector3d c = system.fullPivLu().solve(target);

  LPSolution sol;
  sol.field = field;
  sol.k = k;
  sol.coeffs = {c(0), c(1), c(2)};
  sol.x_star = xs;
  sol.source = LpSource::Tangency;
  sol.feasibility = verify_feasible(sol.coeffs, k, field, verify_grid);
  if (!sol.feasibility.passed) throw InfeasibleTriple(sol.feasibility);
  return sol;
}

LPSolution tangency_cached(int k, Field field) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, Field>, LPSolution> memo;
  const auto key = std::make_pair(k, field);
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  LPSolution sol = tangency_solve(k, field);
  std::unique_lock lock(mutex);
  return memo.try_emplace(key, std::move(sol)).first->second;
}

LPSolution minimize_c0(int k, Field field, int grid_size) {
  if (k < 1) throw DimensionError("LP needs k >= 1");
  if (grid_size < 65) throw DomainError("LP grid needs at least 65 points");
  const auto q = q_polys(k, field);
  const double kd = k;

  std::vector<double> points = chebyshev_grid(grid_size);
  const int fine_size = 8 * (grid_size - 1) + 1;
  const auto fine = certificate_grid(fine_size, tangency_abscissa(k, field));

  for (int round = 0;; ++round) {
    const Eigen::Index m = static_cast<Eigen::Index>(points.size());
    InequalityLp lp;
    lp.objective = Eigen::Vector3d(1.0, 0.0, 0.0);
    lp.constraints.resize(m + 3, 3);
    lp.rhs.resize(m + 3);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double x = points[i];
      lp.constraints.row(i) << 1.0, q.q1(x), q.q2(x);
      lp.rhs(i) = std::sqrt(x);
    }
    lp.constraints.row(m) << 0.0, 1.0, 0.0;  // c1 >= 0
    lp.constraints.row(m + 1) << kd, -1.0, 0.0;  // c1 <= k c0
    lp.constraints.row(m + 2) << 0.0, 0.0, -1.0;  // c2 <= 0
    lp.rhs.tail(3).setZero();

    const LpOptimum opt = solve_inequality_lp(lp);
    LPSolution sol;
    sol.field = field;
    sol.k = k;
    sol.coeffs = {opt.x(0), opt.x(1), opt.x(2)};
    sol.source = LpSource::Minimized;
    sol.refinement_rounds = round;
    sol.feasibility = verify_feasible(sol.coeffs, k, field, fine_size);

    // Report the interior contact point carrying the largest multiplier.
    sol.x_star = tangency_abscissa(k, field);
    double weight = -1.0;
    for (std::size_t a = 0; a < opt.active.size(); ++a) {
      const Eigen::Index idx = opt.active[a];
      if (idx >= m) continue;
      const double x = points[idx];
      if (x > 0.0 && x < 1.0 && opt.multipliers[a] > weight) {
        weight = opt.multipliers[a];
        sol.x_star = x;
      }
    }

    if (sol.feasibility.passed) return sol;

    // Locate every violated local minimum of the slack on the fine grid.
    std::vector<std::pair<double, double>> brackets;
    double worst = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const double s = slack(q, sol.coeffs, fine[i]);
      if (s >= -kSlackTol) continue;
      const bool left_ok = i == 0 || s <= slack(q, sol.coeffs, fine[i - 1]);
      const bool right_ok = i + 1 == fine.size() || s <= slack(q, sol.coeffs, fine[i + 1]);
      if (!left_ok || !right_ok) continue;
      const double lo = fine[i == 0 ? 0 : i - 1];
      const double hi = fine[i + 1 == fine.size() ? i : i + 1];
      brackets.emplace_back(lo, hi);
      const double xm = refine_minimum(q, sol.coeffs, lo, hi);
      worst = std::min({worst, s, slack(q, sol.coeffs, xm)});
    }

    // c0 enters the surrogate with coefficient one, so a uniform shift restores
    // feasibility without touching the other constraints.
    if (round == 3 && worst >= -kFinalLiftTol) {
      sol.coeffs.c0 += -worst + kSlackTol * 1e-3;
      sol.feasibility = verify_feasible(sol.coeffs, k, field, fine_size);
      if (sol.feasibility.passed) return sol;
    }
    if (round == 3) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", sol.feasibility.min_slack);
      throw ConvergenceFailure(std::string("minimize_c0 still infeasible on the fine grid after 3 rounds (min slack ") +
                               buf + ")");
    }

    for (const auto& [lo, hi] : brackets) {
      // A single cut only halves the spacing around a contact point; a geometric
      // patch shrinks the discretization error there by several orders at once.
      const double xm = refine_minimum(q, sol.coeffs, lo, hi);
      points.push_back(xm);
      for (int j = 1; j <= kCutPatchLevels; ++j) {
        const double h = (hi - lo) * std::ldexp(1.0, -j);
        if (xm - h > 0.0) points.push_back(xm - h);
        if (xm + h < 1.0) points.push_back(xm + h);
      }
    }
  }
}

ClosedFormTriple closed_form_triple(int k) {
  if (k < 1) throw DimensionError("closed form needs k >= 1");
  const double kd = k;
  const double r = std::sqrt(1.0 + kd);
  return {
      (1.0 + (kd - 1.0) * r) / (kd * kd),
      r * (-4.0 + kd * kd + 4.0 * r) / (2.0 * kd * (2.0 + kd)),
      (-(2.0 + 4.0 * kd + 2.0 * kd * kd) + r * (2.0 + 3.0 * kd + kd * kd)) / (2.0 * kd * kd),
  };
}

double gram_one_norm_bound_welch(int k, int n) {
  if (k < 1 || n < k) throw DimensionError("Gram bound needs n >= k >= 1");
  const double nd = n;
  return nd + std::sqrt(nd * (nd - 1.0) * (nd * nd / k - nd));
}

double gram_one_norm_bound_bc(int k, int n, Field field) {
  if (k < 1 || n < k) throw DimensionError("Gram bound needs n >= k >= 1");
  const double nd = n;
  if (field == Field::Complex) {
    const double kd = k;
    return nd * nd * (1.0 + (kd - 1.0) * std::sqrt(1.0 + kd)) / (kd * kd);
  }
  return tangency_cached(k, field).coeffs.c0 * nd * nd;
}

double lemma_coherence_floor(int n, double gamma_upper) {
  if (!(gamma_upper > n)) {
    throw DomainError("coherence floor needs gamma_upper > n");
  }
  return n / (gamma_upper - n);
}

GammaInterval gamma_interval(int k, int n, Field field, std::uint64_t seed) {
  if (k < 1 || n < k) throw DimensionError("gamma interval needs n >= k >= 1");
  GammaInterval out;
  out.upper = std::min(gram_one_norm_bound_welch(k, n), gram_one_norm_bound_bc(k, n, field));
  out.lower = -1.0;

  auto consider = [&](const VectorConfiguration& y, std::string name) {
    const double value = gram_report(y).one_norm;
    if (value > out.lower) {
      out.lower = value;
      out.witness = std::move(name);
    }
  };

  if (field == Field::Complex && (k == 2 || k == 3) && n % (k * k) == 0) {
    consider(concat_copies(construct_sic(k), n / (k * k)), "sic-copies");
  }
  if (n % k == 0) {
    const VectorConfiguration basis(field, Eigen::MatrixXcd::Identity(k, k));
    consider(concat_copies(basis, n / k), "orthonormal-copies");
  }
  if (n % (k + 1) == 0) {
    consider(concat_copies(construct_simplex_etf(k, field), n / (k + 1)), "simplex-copies");
  }
  if (out.lower < 0.0) {
    consider(orthogonal_tight_complement(random_configuration(n - k, n, field, seed)),
             "random-complement");
  }
  return out;
}

double q2_kernel_energy(const VectorConfiguration& z, std::span<const double> weights) {
  const Index n = z.size();
  if (static_cast<Index>(weights.size()) != n) {
    throw ShapeMismatch("kernel weights must match the number of vectors");
  }
  const auto q = q_polys(static_cast<int>(z.dim()), z.field());
  const Eigen::MatrixXcd gram = z.matrix().adjoint() * z.matrix();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double ni = std::sqrt(gram(i, i).real());
    if (ni == 0.0) continue;
    for (Index j = 0; j < n; ++j) {
      const double nj = std::sqrt(gram(j, j).real());
      if (nj == 0.0) continue;
      const double t = std::norm(gram(i, j)) / (ni * ni * nj * nj);
      total += q.q2(t) * weights[i] * weights[j];
    }
  }
  return total;
}

FirstMomentTerms first_moment_terms(const VectorConfiguration& y) {
  const Index n = y.size();
  const double kd = static_cast<double>(y.dim());
  const Eigen::MatrixXcd gram = y.matrix().adjoint() * y.matrix();
  FirstMomentTerms out;
  double sum_norms = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double ni = std::sqrt(gram(i, i).real());
    sum_norms += ni;
    if (ni == 0.0) continue;
    for (Index j = 0; j < n; ++j) {
      const double nj = std::sqrt(gram(j, j).real());
      if (nj == 0.0) continue;
      out.weighted_q1 += std::norm(gram(i, j)) / (ni * nj) - ni * nj / kd;
    }
  }
  out.s = sum_norms * sum_norms;
  return out;
}

}  // namespace linepack

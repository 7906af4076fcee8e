#pragma once

#include <Eigen/Dense>

#include <vector>

namespace linepack {

/// minimize objective . x  subject to  constraints * x >= rhs,  x free.
///
/// Intended for a handful of variables and many constraints.
struct InequalityLp {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;  // one row per constraint
  Eigen::VectorXd rhs;
};

struct LpOptimum {
  Eigen::VectorXd x;
  double value = 0.0;
  // Constraints in the final basis with their multipliers (>= 0).
  std::vector<Eigen::Index> active;
  std::vector<double> multipliers;
  int iterations = 0;
};

/// Solves the program through its dual (maximize rhs . y, constraints^T y =
/// objective, y >= 0) with a revised simplex method: a two-phase start, Dantzig
/// pricing, and Bland's rule once progress stalls. Every pricing step of the
/// dual is a search for the most violated primal constraint.
///
/// Throws LpInfeasible when the primal has no feasible point, LpUnbounded when
/// the objective is unbounded below, and ConvergenceFailure if the iteration
/// cap is reached.
LpOptimum solve_inequality_lp(const InequalityLp& lp);

}  // namespace linepack

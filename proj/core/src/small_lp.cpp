#include "linepack/small_lp.hpp"

#include "linepack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace linepack {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kStallLimit = 50;

// Dual problem in standard form: minimize cost . y over y >= 0 with
// columns * y = rhs. Columns [0, m) are the (row-sign adjusted) primal
// constraints, columns [m, m + p) are phase-one artificials.
class DualSimplex {
 public:
  explicit DualSimplex(const InequalityLp& lp)
      : a_(lp.constraints),
        b_(lp.rhs),
        m_(lp.constraints.rows()),
        p_(lp.constraints.cols()),
        sign_(Eigen::VectorXd::Ones(p_)),
        target_(lp.objective) {
    for (Eigen::Index r = 0; r < p_; ++r) {
      if (target_(r) < 0.0) {
        sign_(r) = -1.0;
        target_(r) = -target_(r);
      }
    }
    basis_.resize(p_);
    for (Eigen::Index r = 0; r < p_; ++r) basis_[r] = m_ + r;
  }

  LpOptimum solve() {
    // Phase one: drive the artificials to zero.
    const double phase_one = run(/*phase_two=*/false);
    const double scale = 1.0 + target_.cwiseAbs().maxCoeff();
    if (phase_one > 1e-9 * scale) {
      throw LpUnbounded("no dual-feasible basis: the program is unbounded below or infeasible");
    }
    evict_artificials();
    run(/*phase_two=*/true);

    LpOptimum out;
    const Eigen::VectorXd lambda = multipliers(/*phase_two=*/true);
    out.x = -(sign_.asDiagonal() * lambda);
    out.value = out.x.dot(Eigen::VectorXd(sign_.asDiagonal() * target_));
    const Eigen::VectorXd level = basic_levels();
    for (Eigen::Index i = 0; i < p_; ++i) {
      if (basis_[i] < m_) {
        out.active.push_back(basis_[i]);
        out.multipliers.push_back(std::max(0.0, level(i)));
      }
    }
    out.iterations = iterations_;
    return out;
  }

 private:
  bool artificial(Eigen::Index j) const { return j >= m_; }

  Eigen::VectorXd column(Eigen::Index j) const {
    if (artificial(j)) return Eigen::VectorXd::Unit(p_, j - m_);
    return sign_.asDiagonal() * a_.row(j).transpose();
  }

  double cost(Eigen::Index j, bool phase_two) const {
    if (phase_two) return artificial(j) ? 0.0 : -b_(j);
    return artificial(j) ? 1.0 : 0.0;
  }

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd bm(p_, p_);
    for (Eigen::Index i = 0; i < p_; ++i) bm.col(i) = column(basis_[i]);
    return bm;
  }

  Eigen::VectorXd basic_levels() const { return basis_matrix().partialPivLu().solve(target_); }

  Eigen::VectorXd multipliers(bool phase_two) const {
    Eigen::VectorXd cb(p_);
    for (Eigen::Index i = 0; i < p_; ++i) cb(i) = cost(basis_[i], phase_two);
    return basis_matrix().transpose().partialPivLu().solve(cb);
  }

  double objective(bool phase_two) const {
    const Eigen::VectorXd level = basic_levels();
    double v = 0.0;
    for (Eigen::Index i = 0; i < p_; ++i) v += cost(basis_[i], phase_two) * level(i);
    return v;
  }

  double run(bool phase_two) {
    const double price_tol = 1e-12 * (1.0 + (phase_two ? b_.cwiseAbs().maxCoeff() : 1.0));
    const int cap = 100 * static_cast<int>(m_ + p_) + 1000;
    double last = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (;;) {
      if (++iterations_ > cap) throw ConvergenceFailure("simplex iteration cap reached");
      const Eigen::VectorXd lambda = multipliers(phase_two);
      const Eigen::VectorXd u = sign_.asDiagonal() * lambda;
      const bool bland = stalled > kStallLimit;

      // Reduced cost of structural column j is cost_j - a_j . u.
      Eigen::Index entering = -1;
      double best = -price_tol;
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        const double reduced = cost(j, phase_two) - a_.row(j).dot(u);
        if (reduced < best) {
          entering = j;
          if (bland) break;
          best = reduced;
        }
      }
      if (!phase_two) {
        for (Eigen::Index r = 0; r < p_ && entering < 0; ++r) {
          const Eigen::Index j = m_ + r;
          if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
          if (cost(j, false) - lambda(r) < -price_tol) entering = j;
        }
      }
      if (entering < 0) return objective(phase_two);

      const Eigen::MatrixXd bm = basis_matrix();
      const Eigen::VectorXd dir = bm.partialPivLu().solve(column(entering));
      const Eigen::VectorXd level = bm.partialPivLu().solve(target_);
      Eigen::Index leaving = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < p_; ++i) {
        double candidate;
        if (phase_two && artificial(basis_[i]) && std::abs(dir(i)) > kPivotTol) {
          candidate = 0.0;
        } else if (dir(i) > kPivotTol) {
          candidate = std::max(0.0, level(i)) / dir(i);
        } else {
          continue;
        }
        if (candidate < ratio ||
            (candidate == ratio && leaving >= 0 && basis_[i] < basis_[leaving])) {
          ratio = candidate;
          leaving = i;
        }
      }
      if (leaving < 0) {
        if (phase_two) throw LpInfeasible("dual is unbounded: the constraints are inconsistent");
        throw ConvergenceFailure("phase one ratio test failed");
      }
      basis_[leaving] = entering;

      const double now = objective(phase_two);
      if (now < last - 1e-14 * (1.0 + std::abs(last))) {
        stalled = 0;
        last = now;
      } else {
        ++stalled;
      }
    }
  }

  void evict_artificials() {
    for (Eigen::Index i = 0; i < p_; ++i) {
      if (!artificial(basis_[i])) continue;
      const auto lu = basis_matrix().partialPivLu();
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        if (std::abs(lu.solve(column(j))(i)) > 1e-9) {
          basis_[i] = j;
          break;
        }
      }
      // Otherwise the row is redundant and the artificial stays at level zero.
    }
  }

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::Index m_;
  Eigen::Index p_;
  Eigen::VectorXd sign_;
  Eigen::VectorXd target_;
  std::vector<Eigen::Index> basis_;
  int iterations_ = 0;
};

}  // namespace

LpOptimum solve_inequality_lp(const InequalityLp& lp) {
  if (lp.constraints.cols() != lp.objective.size() || lp.constraints.rows() != lp.rhs.size()) {
    throw ShapeMismatch("inequality LP has inconsistent dimensions");
  }
  if (lp.objective.size() == 0) throw DimensionError("LP needs at least one variable");
  return DualSimplex(lp).solve();
}

}  // namespace linepack

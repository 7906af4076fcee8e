#include "linepack/delsarte.hpp"
#include "linepack/errors.hpp"
#include "linepack/frames.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

namespace linepack {
namespace {

const double kSqrt3 = std::sqrt(3.0);

double printed_c0(int k) { return (1.0 + (k - 1) * std::sqrt(1.0 + k)) / (double(k) * k); }
double printed_c1(int k) {
  const double r = std::sqrt(1.0 + k);
  return r * (-4.0 + double(k) * k + 4.0 * r) / (2.0 * k * (2.0 + k));
}
double printed_c2(int k) {
  const double kd = k;
  return (-(2.0 + 4.0 * kd + 2.0 * kd * kd) + std::sqrt(1.0 + kd) * (2.0 + 3.0 * kd + kd * kd)) /
         (2.0 * kd * kd);
}

TEST(QPolys, ComplexAndRealAtK2) {
  const auto c = q_polys(2, Field::Complex);
  EXPECT_DOUBLE_EQ(c.q2_lin, 1.0);
  EXPECT_NEAR(c.q2_const, 1.0 / 6.0, 1e-16);
  const auto r = q_polys(2, Field::Real);
  EXPECT_DOUBLE_EQ(r.q2_lin, 1.0);
  EXPECT_NEAR(r.q2_const, 1.0 / 8.0, 1e-16);
  for (int k = 1; k <= 20; ++k) {
    for (const Field f : {Field::Real, Field::Complex}) {
      EXPECT_NEAR(q_polys(k, f).q1(1.0 / k), 0.0, 1e-16);
      EXPECT_EQ(q_polys(k, f).q0(0.3), 1.0);
    }
  }
  EXPECT_THROW(q_polys(0, Field::Real), DimensionError);
}

TEST(QPolys, ComplexQ2HasZeroSicMean) {
  // The k^2 SIC overlaps (1 on the diagonal, 1/(k+1) elsewhere) average Q2 to zero.
  for (int k = 1; k <= 10; ++k) {
    const auto q = q_polys(k, Field::Complex);
    const double kk = double(k) * k;
    EXPECT_NEAR(kk * q.q2(1.0) + kk * (kk - 1) * q.q2(1.0 / (k + 1)), 0.0, 1e-10 * kk * kk);
  }
}

TEST(Tangency, ComplexK2) {
  const auto s = tangency_solve(2, Field::Complex);
  EXPECT_NEAR(s.coeffs.c0, (1.0 + kSqrt3) / 4.0, 1e-12);
  EXPECT_NEAR(s.coeffs.c0, 0.6830127, 1e-7);
  EXPECT_NEAR(s.coeffs.c1, 0.75, 1e-12);
  EXPECT_NEAR(s.coeffs.c2, -0.3480762, 1e-7);
  EXPECT_NEAR(s.x_star, 1.0 / 3.0, 1e-16);
  EXPECT_EQ(s.source, LpSource::Tangency);
  EXPECT_TRUE(s.feasibility.passed);
}

TEST(Tangency, RealK2IsExact) {
  const auto s = tangency_solve(2, Field::Real);
  EXPECT_NEAR(s.coeffs.c0, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.coeffs.c1, 7.0 / 9.0, 1e-12);
  EXPECT_NEAR(s.coeffs.c2, -4.0 / 9.0, 1e-12);
  EXPECT_NEAR(s.x_star, 0.25, 1e-16);
}

TEST(Tangency, RealK3MatchesHighPrecisionSolve) {
  const auto s = tangency_solve(3, Field::Real);
  const auto o = oracle::tangency_triple(3, false);
  EXPECT_NEAR(s.coeffs.c0, static_cast<double>(o[0]), 1e-13);
  EXPECT_NEAR(s.coeffs.c1, static_cast<double>(o[1]), 1e-13);
  EXPECT_NEAR(s.coeffs.c2, static_cast<double>(o[2]), 1e-13);
  // Frozen values from a 50-digit solve.
  EXPECT_NEAR(s.coeffs.c0, 0.5393446629166316, 1e-13);
  EXPECT_NEAR(s.coeffs.c1, 0.8740048555356993, 1e-13);
  EXPECT_NEAR(s.coeffs.c2, -0.5338137289060528, 1e-13);
  EXPECT_NEAR(s.x_star, 0.2, 1e-16);
}

TEST(Tangency, KEqualsOneGivesUnitC0) {
  for (const Field f : {Field::Real, Field::Complex}) {
    const auto s = tangency_solve(1, f);
    EXPECT_NEAR(s.coeffs.c0, 1.0, 1e-12);
    EXPECT_TRUE(s.feasibility.passed);
  }
  const auto r = tangency_solve(1, Field::Real);
  EXPECT_NEAR(r.coeffs.c1, 0.6803847577293368, 1e-12);
  EXPECT_NEAR(r.coeffs.c2, -0.34807621135331596, 1e-12);
  const auto c = tangency_solve(1, Field::Complex);
  EXPECT_NEAR(c.coeffs.c1, 0.6262265521467858, 1e-12);
  EXPECT_NEAR(c.coeffs.c2, -0.24264068711928516, 1e-12);
}

TEST(Tangency, ClosedFormAgreementAndSignOfC2) {
  for (int k = 1; k <= 50; ++k) {
    const auto s = tangency_solve(k, Field::Complex);
    EXPECT_NEAR(s.coeffs.c0, printed_c0(k), 1e-9) << k;
    EXPECT_NEAR(s.coeffs.c1, printed_c1(k), 1e-9) << k;
    EXPECT_NEAR(s.coeffs.c2, -printed_c2(k), 1e-9) << k;
    EXPECT_GT(printed_c2(k), 0.0) << k;
    const auto cf = closed_form_triple(k);
    EXPECT_NEAR(cf.c0, printed_c0(k), 1e-14);
    EXPECT_NEAR(cf.c1, printed_c1(k), 1e-14);
    EXPECT_NEAR(cf.c2_quoted, printed_c2(k), 1e-14);
    const double simplified = std::pow(k + 1.0, 1.5) * std::pow(std::sqrt(k + 1.0) - 1.0, 2) / (2.0 * k * k);
    EXPECT_NEAR(printed_c2(k), simplified, 1e-12 * (1 + simplified));
  }
}

TEST(Tangency, ResidualsAndOracleForAllK) {
  for (const Field f : {Field::Real, Field::Complex}) {
    for (int k = 1; k <= 50; ++k) {
      const auto s = tangency_solve(k, f);
      const auto q = q_polys(k, f);
      const double xs = s.x_star;
      EXPECT_NEAR(xs, tangency_abscissa(k, f), 0.0);
      EXPECT_LE(std::abs(surrogate(q, s.coeffs, xs) - std::sqrt(xs)), 1e-10);
      EXPECT_LE(std::abs(surrogate(q, s.coeffs, 1.0) - 1.0), 1e-10);
      EXPECT_LE(std::abs(surrogate_prime(q, s.coeffs, xs) - 0.5 / std::sqrt(xs)), 1e-9);
      const auto o = oracle::tangency_triple(k, f == Field::Complex);
      EXPECT_NEAR(s.coeffs.c0, static_cast<double>(o[0]), 1e-11);
      EXPECT_NEAR(s.coeffs.c1, static_cast<double>(o[1]), 1e-10);
      EXPECT_NEAR(s.coeffs.c2, static_cast<double>(o[2]), 1e-10);
      EXPECT_LE(s.coeffs.c2, 1e-12);
      EXPECT_GE(s.coeffs.c1, 0.0);
      EXPECT_LE(s.coeffs.c1, k * s.coeffs.c0);
      EXPECT_GE(s.feasibility.min_slack, -1e-9);
    }
  }
}

TEST(Tangency, CachedMatchesAndIsThreadSafe) {
  std::vector<std::thread> threads;
  std::vector<double> seen(16);
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([t, &seen] { seen[t] = tangency_cached(2 + t % 4, Field::Real).coeffs.c0; });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < 16; ++t) {
    EXPECT_EQ(seen[t], tangency_solve(2 + t % 4, Field::Real).coeffs.c0);
  }
}

TEST(VerifyFeasible, TangencyTriplePassesNearTouchPoint) {
  const auto s = tangency_solve(2, Field::Complex);
  const auto cert = verify_feasible(s.coeffs, 2, Field::Complex, 4097);
  EXPECT_TRUE(cert.passed);
  EXPECT_NEAR(cert.min_slack, 0.0, 1e-9);
  // f touches sqrt(x) at x* and again at 1; either may be reported.
  EXPECT_TRUE(std::abs(cert.argmin_x - 1.0 / 3.0) < 1e-2 || cert.argmin_x == 1.0);
  const auto q = q_polys(2, Field::Complex);
  EXPECT_NEAR(surrogate(q, s.coeffs, 1.0 / 3.0) - std::sqrt(1.0 / 3.0), 0.0, 1e-14);
  EXPECT_GE(cert.grid_size, 4097);
  EXPECT_EQ(cert.checked_constraints.size(), 4u);
}

TEST(VerifyFeasible, QuotedC2Fails) {
  const auto cf = closed_form_triple(2);
  EXPECT_NEAR(cf.c2_quoted, 0.3480762, 1e-7);
  const auto cert = verify_feasible({cf.c0, cf.c1, cf.c2_quoted}, 2, Field::Complex, 4097);
  EXPECT_FALSE(cert.passed);
  bool found = false;
  for (const auto& c : cert.checked_constraints) {
    if (c.name == "c2 <= 0") {
      found = true;
      EXPECT_FALSE(c.satisfied);
      EXPECT_NEAR(c.margin, -cf.c2_quoted, 1e-15);
    }
  }
  EXPECT_TRUE(found);
}

TEST(VerifyFeasible, ConstantOneAlwaysPasses) {
  for (int k = 1; k <= 12; ++k) {
    for (const Field f : {Field::Real, Field::Complex}) {
      const auto cert = verify_feasible({1.0, 0.0, 0.0}, k, f, 129);
      EXPECT_TRUE(cert.passed);
      EXPECT_NEAR(cert.min_slack, 0.0, 1e-15);
      EXPECT_NEAR(cert.argmin_x, 1.0, 1e-15);
    }
  }
}

TEST(VerifyFeasible, GridIncludesEndpoints) {
  const auto grid = chebyshev_grid(9);
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(grid[i - 1], grid[i]);
  EXPECT_THROW(verify_feasible({1, 0, 0}, 2, Field::Real, 2), DomainError);
}

TEST(VerifyFeasible, ScaledDownTripleFails) {
  auto c = tangency_solve(3, Field::Complex).coeffs;
  c.c0 -= 1e-4;
  EXPECT_FALSE(verify_feasible(c, 3, Field::Complex, 4097).passed);
}

TEST(MinimizeC0, ReproducesTangencyValues) {
  const auto c2 = minimize_c0(2, Field::Complex, 4097);
  EXPECT_NEAR(c2.coeffs.c0, 0.6830127, 1e-6);
  EXPECT_EQ(c2.source, LpSource::Minimized);
  EXPECT_TRUE(c2.feasibility.passed);
  EXPECT_NEAR(minimize_c0(1, Field::Complex, 4097).coeffs.c0, 1.0, 1e-6);
  EXPECT_NEAR(minimize_c0(2, Field::Real, 4097).coeffs.c0, 2.0 / 3.0, 1e-6);
  EXPECT_THROW(minimize_c0(2, Field::Real, 64), DomainError);
}

TEST(MinimizeC0, BracketsTangencyOptimum) {
  for (const Field f : {Field::Real, Field::Complex}) {
    for (int k : {1, 2, 3, 5, 8, 13, 21}) {
      const double tangent = tangency_solve(k, f).coeffs.c0;
      const auto m = minimize_c0(k, f, 4097);
      EXPECT_LE(m.coeffs.c0, tangent + 1e-9) << k;
      EXPECT_GE(m.coeffs.c0, tangent - 1e-6) << k;
      EXPECT_GE(m.feasibility.min_slack, -1e-9);
      EXPECT_LE(m.refinement_rounds, 3);
    }
  }
}

TEST(MinimizeC0, ConvergesForAllKBothFields) {
  for (const Field f : {Field::Real, Field::Complex}) {
    for (int k = 1; k <= 50; ++k) {
      const auto m = minimize_c0(k, f);
      EXPECT_TRUE(m.feasibility.passed) << k;
      EXPECT_NEAR(m.coeffs.c0, tangency_cached(k, f).coeffs.c0, 1e-6) << k;
    }
  }
}

TEST(MinimizeC0, CoarseGridsStayFeasibleAndNearOptimal) {
  for (const int grid : {65, 129, 513}) {
    for (const Field f : {Field::Real, Field::Complex}) {
      for (int k = 1; k <= 50; ++k) {
        const auto m = minimize_c0(k, f, grid);
        EXPECT_TRUE(m.feasibility.passed) << grid << " " << k;
        EXPECT_LE(m.refinement_rounds, 3);
        EXPECT_NEAR(m.coeffs.c0, tangency_cached(k, f).coeffs.c0, 1e-6) << grid << " " << k;
      }
    }
  }
}

TEST(GramBounds, WelchExamples) {
  EXPECT_NEAR(gram_one_norm_bound_welch(2, 4), 4.0 + 4.0 * kSqrt3, 1e-12);
  EXPECT_NEAR(gram_one_norm_bound_welch(2, 4), 10.9282032, 1e-7);
  for (int n = 1; n <= 10; ++n) EXPECT_NEAR(gram_one_norm_bound_welch(n, n), n, 1e-12);
  EXPECT_NEAR(gram_one_norm_bound_welch(1, 2), 4.0, 1e-12);
  EXPECT_THROW(gram_one_norm_bound_welch(3, 2), DimensionError);
}

TEST(GramBounds, BukhCoxExamples) {
  EXPECT_NEAR(gram_one_norm_bound_bc(2, 8, Field::Complex), 16.0 * (1.0 + kSqrt3), 1e-12);
  EXPECT_NEAR(gram_one_norm_bound_bc(2, 8, Field::Complex), 43.7128129, 1e-7);
  EXPECT_NEAR(gram_one_norm_bound_bc(3, 9, Field::Complex), 45.0, 1e-12);
  for (int n = 1; n <= 20; ++n) EXPECT_NEAR(gram_one_norm_bound_bc(1, n, Field::Complex), double(n) * n, 1e-10);
  for (int k = 1; k <= 30; ++k) {
    for (const Field f : {Field::Real, Field::Complex}) {
      EXPECT_NEAR(gram_one_norm_bound_bc(k, 2 * k + 1, f),
                  tangency_solve(k, f).coeffs.c0 * (2 * k + 1) * (2 * k + 1), 1e-9);
    }
  }
  EXPECT_THROW(gram_one_norm_bound_bc(4, 3, Field::Complex), DimensionError);
}

TEST(GramBounds, SharperRangeAgainstWelch) {
  for (int d = 1; d <= 20; ++d) {
    const double threshold = 0.5 + std::sqrt(1.0 + 4.0 * d) / 2.0;
    for (int k = 1; k <= 60; ++k) {
      const int n = d + k;
      const double bc = gram_one_norm_bound_bc(k, n, Field::Complex);
      const double welch = gram_one_norm_bound_welch(k, n);
      if (k == 1) {
        // Both bounds collapse to n^2.
        EXPECT_NEAR(bc, welch, 1e-12 * n * n);
      } else if (k < threshold) {
        EXPECT_LT(bc, welch) << "d=" << d << " k=" << k;
      } else {
        EXPECT_LE(welch, bc * (1 + 1e-12)) << "d=" << d << " k=" << k;
      }
    }
  }
}

TEST(LemmaFloor, Examples) {
  EXPECT_NEAR(lemma_coherence_floor(8, 16.0 * (1.0 + kSqrt3)), 4.0 / (4.0 + 8.0 * kSqrt3), 1e-14);
  EXPECT_NEAR(lemma_coherence_floor(3, 9.0), 0.5, 1e-15);
  EXPECT_THROW(lemma_coherence_floor(5, 5.0), DomainError);
  EXPECT_THROW(lemma_coherence_floor(5, 4.0), DomainError);
  double prev = lemma_coherence_floor(10, 10.5);
  for (double g = 11.0; g < 200.0; g += 0.5) {
    const double f = lemma_coherence_floor(10, g);
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(GammaIntervalTest, Examples) {
  const auto a = gamma_interval(2, 8, Field::Complex);
  EXPECT_NEAR(a.lower, 16.0 * (1.0 + kSqrt3), 1e-9);
  EXPECT_NEAR(a.upper, 16.0 * (1.0 + kSqrt3), 1e-9);
  EXPECT_EQ(a.witness, "sic-copies");

  const auto b = gamma_interval(3, 3, Field::Real);
  EXPECT_NEAR(b.lower, 3.0, 1e-12);
  EXPECT_NEAR(b.upper, 3.0, 1e-12);

  const auto c = gamma_interval(2, 4, Field::Complex);
  EXPECT_NEAR(c.lower, 4.0 + 4.0 * kSqrt3, 1e-9);
  EXPECT_NEAR(c.upper, 4.0 + 4.0 * kSqrt3, 1e-9);

  EXPECT_THROW(gamma_interval(4, 3, Field::Real), DimensionError);
}

TEST(GammaIntervalTest, LowerNeverExceedsUpper) {
  for (const Field f : {Field::Real, Field::Complex}) {
    for (int k = 1; k <= 6; ++k) {
      for (int n = k; n <= 20; ++n) {
        const auto g = gamma_interval(k, n, f);
        EXPECT_LE(g.lower, g.upper + 1e-9) << k << "," << n;
        EXPECT_FALSE(g.witness.empty());
      }
    }
  }
}

TEST(Kernel, Q2PositivityOnRandomConfigurations) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Field f : {Field::Real, Field::Complex}) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const int k = 1 + static_cast<int>(seed % 6);
      const int n = 1 + static_cast<int>((seed * 7) % 30);
      const auto z = random_configuration(k, n, f, seed);
      std::vector<double> w(n);
      double total = 0.0;
      for (auto& x : w) total += (x = u(rng));
      EXPECT_GE(q2_kernel_energy(z, w), -1e-9 * total * total) << seed;
    }
  }
}

TEST(Kernel, Q2VanishesOnSicWithUniformWeights) {
  for (int k : {2, 3}) {
    const auto z = construct_sic(k);
    std::vector<double> w(z.size(), 1.0);
    EXPECT_NEAR(q2_kernel_energy(z, w), 0.0, 1e-10);
  }
  std::vector<double> bad(3, 1.0);
  EXPECT_THROW(q2_kernel_energy(construct_sic(2), bad), ShapeMismatch);
}

TEST(Kernel, FirstMomentBoundOnTightFrames) {
  for (const Field f : {Field::Real, Field::Complex}) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const int d = 1 + static_cast<int>(seed % 5);
      const int n = d + 1 + static_cast<int>(seed % 7);
      const auto y = orthogonal_tight_complement(random_configuration(d, n, f, seed));
      const auto t = first_moment_terms(y);
      const double k = static_cast<double>(y.dim());
      EXPECT_LE(t.weighted_q1, (double(n) * n - t.s) / k + 1e-8) << seed;
    }
  }
}

}  // namespace
}  // namespace linepack

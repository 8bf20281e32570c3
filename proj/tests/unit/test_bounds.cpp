#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "smlab/bounds.hpp"

using namespace smlab;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
}  // namespace

TEST(Bernstein, Examples) {
  EXPECT_NEAR(bernstein_tail(2.0, 1.0), 2 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(bernstein_tail(4.0, 100.0), 2 * std::exp(-0.04), 1e-15);
  EXPECT_NEAR(bernstein_tail(1e-12, 1.0), 2.0, 1e-9);
  EXPECT_NEAR(bernstein_tail(3.0, 0.0), 2 * std::exp(-1.5), 1e-15);
}

TEST(Bernstein, Errors) {
  EXPECT_THROW(bernstein_tail(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(bernstein_tail(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(bernstein_tail(1.0, -1.0), std::invalid_argument);
}

TEST(Bernstein, DecreasingInT) {
  double last = 2.0;
  for (double t = 0.1; t < 30; t += 0.1) {
    const double v = bernstein_tail(t, 3.0);
    EXPECT_LE(v, last);
    last = v;
  }
}

TEST(EigenangleTail, Examples) {
  for (int m : {1, 2, 5}) {
    // N = e m makes log(N/m) + 1 = 2; u = 2m gives min{4m^2 / 2m, 2m} = 2m.
    // The integer signature cannot carry N = e m, so reproduce through the
    // same exponent at u = 2m on N with log(N/m) + 1 = 2 approximately.
    const int n = static_cast<int>(std::round(kE * m));
    const double v = eigenangle_tail(n, m, 2.0 * m);
    const double d = m * (std::log(static_cast<double>(n) / m) + 1.0);
    EXPECT_NEAR(v, 4 * std::exp(-std::min(4.0 * m * m / d, 2.0 * m)), 1e-15);
  }
  EXPECT_NEAR(eigenangle_tail(8, 2, 1.0), 4 * std::exp(-1.0 / (2 * std::log(4.0) + 2)), 1e-15);
  EXPECT_NEAR(eigenangle_tail(8, 2, 1e-12), 4.0, 1e-9);
}

TEST(EigenangleTail, Errors) {
  EXPECT_THROW(eigenangle_tail(4, 5, 1.0), std::invalid_argument);
  EXPECT_THROW(eigenangle_tail(4, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(eigenangle_tail(4, 1, 0.0), std::invalid_argument);
}

TEST(PowerVarianceBound, Values) {
  EXPECT_DOUBLE_EQ(power_variance_bound(8, 8), 8.0);
  EXPECT_NEAR(power_variance_bound(32, 4), 4 * (std::log(8.0) + 1), 1e-14);
}

TEST(MeanWpBound, Examples) {
  EXPECT_NEAR(mean_wp_bound(8, 1, 1.0), 8 * (4 * kPi / 8) * std::sqrt(std::log(8.0) + 1) + kPi / 8, 1e-12);
  for (int m : {1, 3, 9}) {
    for (double p : {1.0, 2.0, 3.0}) {
      const double lead = std::pow(8 * std::tgamma(p + 1), 1 / p);
      EXPECT_NEAR(mean_wp_bound(m, m, p), lead * 4 * kPi * std::sqrt(m) / m + kPi / m, 1e-12);
    }
  }
  EXPECT_NEAR(mean_wp_bound(16, 2, 3.0, ConstantMode::absolute(0.5)),
              0.5 * 3 * std::sqrt(2 * (std::log(8.0) + 1)) / 16, 1e-15);
}

TEST(MeanWpBound, ProofExplicitDominatesUnitConstant) {
  for (int n = 1; n <= 512; n *= 2) {
    for (int m = 1; m <= n; m *= 2) {
      for (double p : {1.0, 1.5, 2.0, 4.0, 10.0}) {
        EXPECT_GE(mean_wp_bound(n, m, p), mean_wp_bound(n, m, p, ConstantMode::absolute(1.0)));
      }
    }
  }
}

TEST(MeanWpBound, QueryMissingField) {
  BoundQuery q;
  q.n = 8;
  q.m = 1;
  try {
    mean_wp_bound(q);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("'p'"), std::string::npos);
  }
  q.p = 1.0;
  EXPECT_DOUBLE_EQ(mean_wp_bound(q), mean_wp_bound(8, 1, 1.0));
}

TEST(TailBound, Examples) {
  EXPECT_NEAR(tail_bound(10, 1, 1.0, 0.5), std::exp(-25.0 / 24), 1e-15);
  EXPECT_DOUBLE_EQ(tail_bound(10, 3, 4.0, 0.0), 1.0);
  EXPECT_NEAR(tail_bound(16, 2, 4.0, 0.3), std::exp(-std::pow(16.0, 1.5) * 0.09 / 48), 1e-15);
}

TEST(TailBound, ContinuousAtTwo) {
  for (int n : {4, 32, 100}) {
    for (double t : {0.05, 0.2, 1.0}) {
      EXPECT_NEAR(tail_bound(n, 2, 2.0, t), tail_bound(n, 2, 2.0 + 1e-9, t), 1e-8);
    }
  }
}

TEST(TailBound, MatchesConcentrationAfterBlockSubstitution) {
  for (int n : {4, 16, 60}) {
    for (int m : {1, 2, 4}) {
      if (2 * m > n) continue;
      for (double p : {1.0, 2.0, 3.0, 6.0}) {
        for (double t : {0.01, 0.1, 0.5}) {
          const double via = concentration_bound(n / (2.0 * m), lipschitz_constant(n, p), t);
          EXPECT_NEAR(tail_bound(n, m, p, t), via, 1e-13 + 1e-12 * via);
        }
      }
    }
  }
}

TEST(AsRate, Examples) {
  EXPECT_NEAR(as_rate(kE * kE, 1, 1.0, 1.0), std::sqrt(2.0) / (kE * kE), 1e-14);
  EXPECT_NEAR(as_rate(100, 3, 2.0, 2.0), 2 * 2 * std::sqrt(3 * std::log(100.0)) / 100, 1e-14);
  EXPECT_NEAR(as_rate(100, 3, 4.0, 1.0), 4 * std::sqrt(3 * std::log(100.0)) / std::pow(100.0, 0.75), 1e-14);
  EXPECT_NEAR(as_rate(64, 1, 1.0), mean_wp_bound(64, 1, 1.0) + 5 * std::sqrt(std::log(64.0)) / 64, 1e-13);
  EXPECT_THROW(as_rate(1.0, 1, 1.0), std::invalid_argument);
}

TEST(AsRate, BranchesAgreeAtTwo) {
  for (double n : {10.0, 77.0}) {
    EXPECT_NEAR(as_rate(n, 2, 2.0, 1.0) / 2.0, as_rate(n, 2, 2.0 + 1e-10, 1.0) / (2.0 + 1e-10), 1e-9);
  }
}

TEST(AsRate, DecreasingInN) {
  for (double p : {1.0, 2.0, 5.0}) {
    for (int m : {1, 4}) {
      double last = as_rate(8, m, p);
      for (int n = 9; n <= 4096; ++n) {
        const double v = as_rate(n, m, p);
        EXPECT_LT(v, last) << "n=" << n << " m=" << m << " p=" << p;
        last = v;
      }
    }
  }
}

TEST(Lipschitz, Values) {
  EXPECT_NEAR(lipschitz_constant(16, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(lipschitz_constant(16, 4.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(lipschitz_constant(1, 7.0), 1.0);
  EXPECT_NEAR(lsi_constant(6), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(concentration_bound(10, 0.5, 0.0), 1.0);
  EXPECT_NEAR(concentration_bound(12, 0.5, 1.0), std::exp(-4.0), 1e-15);
  EXPECT_THROW(concentration_bound(12, 0.0, 1.0), std::invalid_argument);
}

TEST(Queries, MissingFieldsNamed) {
  BoundQuery q;
  EXPECT_THROW(bernstein_tail(q), std::invalid_argument);
  EXPECT_THROW(eigenangle_tail(q), std::invalid_argument);
  EXPECT_THROW(tail_bound(q), std::invalid_argument);
  EXPECT_THROW(concentration_bound(q), std::invalid_argument);
  q.t = 2.0;
  q.sigma_sq = 1.0;
  EXPECT_DOUBLE_EQ(bernstein_tail(q), bernstein_tail(2.0, 1.0));
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "smlab/dpp.hpp"
#include "smlab/group_sampler.hpp"
#include "smlab/rng.hpp"
#include "smlab/spectral.hpp"
#include "smlab/stats.hpp"

using namespace smlab;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> binomial_draws(int count, int trials, double q, RngStream rng, int shift = 0) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    int s = shift;
    for (int k = 0; k < trials; ++k) s += rng.uniform() < q;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(TwoSample, IdenticalSequences) {
  const auto a = binomial_draws(2000, 10, 0.5, RngStream(1, 0));
  const TestResult big = two_sample_count_test(a, a);
  EXPECT_EQ(big.method, TestMethod::ChiSquare);
  EXPECT_NEAR(big.p_value, 1.0, 1e-12);
  const std::vector<int> small(a.begin(), a.begin() + 40);
  const TestResult perm = two_sample_count_test(small, small);
  EXPECT_EQ(perm.method, TestMethod::Permutation);
  EXPECT_NEAR(perm.p_value, 1.0, 1e-12);
}

TEST(TwoSample, DetectsShift) {
  const auto a = binomial_draws(10000, 20, 0.5, RngStream(2, 0));
  const auto b = binomial_draws(10000, 20, 0.5, RngStream(2, 1), 3);
  EXPECT_LT(two_sample_count_test(a, b).p_value, 1e-6);
}

TEST(TwoSample, SmallSampleDetectsGrossShift) {
  const auto a = binomial_draws(40, 20, 0.5, RngStream(3, 0));
  const auto b = binomial_draws(40, 20, 0.5, RngStream(3, 1), 6);
  const TestResult r = two_sample_count_test(a, b);
  EXPECT_EQ(r.method, TestMethod::Permutation);
  EXPECT_LT(r.p_value, 1e-3);
  EXPECT_GE(r.p_value, 1.0 / (kPermutationRounds + 1));
}

TEST(TwoSample, NullCalibrationOnDppCounts) {
  const BernoulliProfile prof = restriction_eigenvalues(make_kernel(KernelFamily::Unitary, 12), 2.0);
  int ok = 0;
  for (int rep = 0; rep < 100; ++rep) {
    RngStream ra(40 + rep, 0);
    RngStream rb(40 + rep, 1);
    std::vector<int> a;
    std::vector<int> b;
    for (int i = 0; i < 500; ++i) {
      a.push_back(sample_count_bernoulli(prof, ra));
      b.push_back(sample_count_bernoulli(prof, rb));
    }
    ok += two_sample_count_test(a, b).p_value > 1e-3;
  }
  EXPECT_GE(ok, 95);
}

TEST(TwoSample, Deterministic) {
  const auto a = binomial_draws(30, 8, 0.3, RngStream(5, 0));
  const auto b = binomial_draws(30, 8, 0.4, RngStream(5, 1));
  EXPECT_EQ(two_sample_count_test(a, b).p_value, two_sample_count_test(a, b).p_value);
}

TEST(TwoSample, RejectsEmpty) {
  EXPECT_THROW(two_sample_count_test({}, {1}), std::invalid_argument);
  EXPECT_THROW(two_sample_count_test({1}, {}), std::invalid_argument);
}

TEST(Uniformity, EquallySpacedGrid) {
  std::vector<double> g;
  for (int i = 0; i < 1000; ++i) g.push_back(2 * kPi * (i + 0.5) / 1000);
  const TestResult r = uniformity_test(g);
  EXPECT_NEAR(r.statistic, 0.5 / 1000, 1e-12);
  EXPECT_GT(r.p_value, 0.999);
}

TEST(Uniformity, DegenerateSample) {
  EXPECT_LT(uniformity_test(std::vector<double>(500, 1.0)).p_value, 1e-10);
  EXPECT_THROW(uniformity_test({}), std::invalid_argument);
}

TEST(Uniformity, PowerNOfUnitaryIsIid) {
  std::vector<double> pooled;
  for (int r = 0; r < 100; ++r) {
    RngStream rng(6, r);
    const AngleSet a = power_angles(eigenangles(sample_haar(make_group(GroupFamily::Unitary, 8), rng)), 8);
    pooled.insert(pooled.end(), a.angles.begin(), a.angles.end());
  }
  EXPECT_GT(uniformity_test(pooled).p_value, 1e-3);
}

// Small-x theta-function form of the same distribution as a separate oracle.
TEST(Kolmogorov, SurvivalMatchesThetaForm) {
  for (double x : {0.4, 0.6, 0.9, 1.2, 1.5}) {
    double cdf = 0.0;
    for (int k = 1; k <= 50; ++k) {
      cdf += std::exp(-(2 * k - 1) * (2 * k - 1) * kPi * kPi / (8 * x * x));
    }
    cdf *= std::sqrt(2 * kPi) / x;
    EXPECT_NEAR(kolmogorov_survival(x), 1.0 - cdf, 1e-12) << x;
  }
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 1e-4);
  EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(ChiSquareSurvival, ClosedForms) {
  for (double x : {0.1, 1.0, 3.0, 12.0}) {
    EXPECT_NEAR(chi_square_survival(x, 2), std::exp(-x / 2), 1e-14);
    EXPECT_NEAR(chi_square_survival(x, 1), std::erfc(std::sqrt(x / 2)), 1e-14);
    EXPECT_NEAR(chi_square_survival(x, 4), std::exp(-x / 2) * (1 + x / 2), 1e-14);
  }
  EXPECT_DOUBLE_EQ(chi_square_survival(0.0, 3), 1.0);
}

TEST(Binomial, Pmf) {
  const auto pmf = binomial_pmf(6, 0.3);
  ASSERT_EQ(pmf.size(), 7u);
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-14);
  EXPECT_NEAR(pmf[2], 15 * 0.09 * std::pow(0.7, 4), 1e-15);
  EXPECT_DOUBLE_EQ(binomial_pmf(3, 0.0)[0], 1.0);
  EXPECT_DOUBLE_EQ(binomial_pmf(3, 1.0)[3], 1.0);
}

TEST(ChiSquareGof, AcceptsTrueAndRejectsWrong) {
  const auto draws = binomial_draws(5000, 12, 0.4, RngStream(7, 0));
  EXPECT_GT(chi_square_gof(draws, binomial_pmf(12, 0.4)).p_value, 1e-3);
  EXPECT_LT(chi_square_gof(draws, binomial_pmf(12, 0.45)).p_value, 1e-6);
  EXPECT_THROW(chi_square_gof({13}, binomial_pmf(12, 0.4)), std::invalid_argument);
}

TEST(Summarize, SmallSample) {
  const MomentSummary s = summarize({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.variance, 5.0 / 3, 1e-15);
  EXPECT_EQ(s.count, 4u);
  // Central moments mu2 = 1.25, mu4 = 2.5625.
  EXPECT_NEAR(s.variance_se, std::sqrt((2.5625 - 1.25 * 1.25 / 3) / 4), 1e-14);
}

// For normal data Var(s^2) = 2 sigma^4 / (n - 1).
TEST(Summarize, VarianceStandardErrorCalibrated) {
  RngStream rng(8, 0);
  const int n = 400;
  double se_sum = 0.0;
  for (int r = 0; r < 200; ++r) {
    std::vector<double> xs(n);
    for (double& x : xs) x = 2.0 * rng.normal();
    se_sum += summarize(xs).variance_se;
  }
  EXPECT_NEAR(se_sum / 200, 4.0 * std::sqrt(2.0 / (n - 1)), 0.03 * 4.0 * std::sqrt(2.0 / (n - 1)));
}

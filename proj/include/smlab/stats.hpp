#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace smlab {

enum class TestMethod { ChiSquare, Permutation, KolmogorovSmirnov };

struct TestResult {
  double p_value = 1.0;
  double statistic = 0.0;
  int df = 0;  ///< degrees of freedom after cell merging (chi-square only)
  TestMethod method = TestMethod::ChiSquare;
};

const char* test_method_name(TestMethod m);

/// Pooled sizes below this use the permutation test.
inline constexpr std::size_t kPermutationThreshold = 200;
inline constexpr int kPermutationRounds = 9999;

/// Homogeneity test for two samples of integer counts: chi-square on the
/// pooled support with adjacent cells merged until every expected count is at
/// least 5, or a seeded Monte Carlo permutation test for small pooled sizes.
TestResult two_sample_count_test(const std::vector<int>& a, const std::vector<int>& b);

/// Kolmogorov-Smirnov test of angles against uniform on [0, 2pi), with the
/// asymptotic p-value.
TestResult uniformity_test(const std::vector<double>& angles);

/// Chi-square goodness of fit of integer observations to a pmf on
/// {0, ..., pmf.size() - 1}, with cells merged to expected count >= 5.
TestResult chi_square_gof(const std::vector<int>& observations, const std::vector<double>& pmf);

/// Survival function of the Kolmogorov distribution, P[K > x].
double kolmogorov_survival(double x);

/// P[X >= x] for X chi-square with df degrees of freedom.
double chi_square_survival(double x, int df);

std::vector<double> binomial_pmf(int n, double q);

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;       ///< unbiased
  double variance_se = 0.0;    ///< standard error of the unbiased variance
  std::size_t count = 0;
};

MomentSummary summarize(const std::vector<double>& xs);

}  // namespace smlab

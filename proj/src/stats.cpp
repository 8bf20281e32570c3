#include "smlab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "smlab/rng.hpp"

namespace smlab {

namespace {

constexpr double kMinExpected = 5.0;
constexpr std::uint64_t kPermutationSeed = 0x70e2a11f5eedULL;

struct Table {
  std::vector<double> a;
  std::vector<double> b;
};

Table pooled_table(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, std::pair<double, double>> cells;
  for (int x : a) cells[x].first += 1.0;
  for (int x : b) cells[x].second += 1.0;
  Table t;
  for (const auto& [value, counts] : cells) {
    t.a.push_back(counts.first);
    t.b.push_back(counts.second);
  }
  return t;
}

// Greedy left-to-right merge of adjacent cells; a short tail is folded into
// the last complete cell.
template <class Ok>
std::vector<std::size_t> merge_boundaries(std::size_t cells, Ok ok) {
  std::vector<std::size_t> ends;
  std::size_t start = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    if (ok(start, i + 1)) {
      ends.push_back(i + 1);
      start = i + 1;
    }
  }
  if (ends.empty()) {
    ends.push_back(cells);
  } else if (ends.back() != cells) {
    ends.back() = cells;
  }
  return ends;
}

double homogeneity_statistic(const Table& t, double na, double nb) {
  const double total = na + nb;
  double stat = 0.0;
  for (std::size_t i = 0; i < t.a.size(); ++i) {
    const double pooled = t.a[i] + t.b[i];
    if (pooled == 0.0) continue;
    const double ea = na * pooled / total;
    const double eb = nb * pooled / total;
    stat += (t.a[i] - ea) * (t.a[i] - ea) / ea + (t.b[i] - eb) * (t.b[i] - eb) / eb;
  }
  return stat;
}

TestResult chi_square_homogeneity(const Table& raw, double na, double nb) {
  const double total = na + nb;
  auto sum_range = [](const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  };
  const auto ends = merge_boundaries(raw.a.size(), [&](std::size_t lo, std::size_t hi) {
    const double pooled = sum_range(raw.a, lo, hi) + sum_range(raw.b, lo, hi);
    return std::min(na, nb) * pooled / total >= kMinExpected;
  });
  Table merged;
  std::size_t lo = 0;
  for (std::size_t hi : ends) {
    merged.a.push_back(sum_range(raw.a, lo, hi));
    merged.b.push_back(sum_range(raw.b, lo, hi));
    lo = hi;
  }
  TestResult r;
  r.method = TestMethod::ChiSquare;
  r.df = static_cast<int>(merged.a.size()) - 1;
  r.statistic = homogeneity_statistic(merged, na, nb);
  r.p_value = r.df < 1 ? 1.0 : chi_square_survival(r.statistic, r.df);
  return r;
}

TestResult permutation_homogeneity(const std::vector<int>& a, const std::vector<int>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::vector<int> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<int> support(pooled);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  std::vector<int> code(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    code[i] = static_cast<int>(std::lower_bound(support.begin(), support.end(), pooled[i]) - support.begin());
  }
  auto statistic_of = [&](const std::vector<int>& labels) {
    Table t{std::vector<double>(support.size(), 0.0), std::vector<double>(support.size(), 0.0)};
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto& row = i < a.size() ? t.a : t.b;
      row[static_cast<std::size_t>(labels[i])] += 1.0;
    }
    return homogeneity_statistic(t, na, nb);
  };

  TestResult r;
  r.method = TestMethod::Permutation;
  r.df = static_cast<int>(support.size()) - 1;
  r.statistic = statistic_of(code);
  if (r.df < 1) return r;

  RngStream rng(kPermutationSeed, pooled.size());
  const double tol = 1e-9 * std::max(1.0, r.statistic);
  int extreme = 0;
  std::vector<int> shuffled(code);
  for (int round = 0; round < kPermutationRounds; ++round) {
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
    }
    if (statistic_of(shuffled) >= r.statistic - tol) ++extreme;
  }
  r.p_value = (1.0 + extreme) / (1.0 + kPermutationRounds);
  return r;
}

}  // namespace

const char* test_method_name(TestMethod m) {
  switch (m) {
    case TestMethod::ChiSquare:
      return "chi-square";
    case TestMethod::Permutation:
      return "permutation";
    case TestMethod::KolmogorovSmirnov:
      return "kolmogorov-smirnov";
  }
  return "?";
}

double chi_square_survival(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_square_survival: df must be >= 1");
  if (!(x > 0.0)) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

double kolmogorov_survival(double x) {
  if (!(x > 0.0)) return 1.0;
  constexpr double kPi = std::numbers::pi;
  if (x < 1.18) {
    // Small-x form of the series, which converges fast there.
    const double y = -kPi * kPi / (8.0 * x * x);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp((2 * k - 1) * (2 * k - 1) * y);
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

TestResult two_sample_count_test(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_count_test: samples must be nonempty");
  if (a.size() + b.size() < kPermutationThreshold) return permutation_homogeneity(a, b);
  return chi_square_homogeneity(pooled_table(a, b), static_cast<double>(a.size()),
                                static_cast<double>(b.size()));
}

TestResult uniformity_test(const std::vector<double>& angles) {
  if (angles.empty()) throw std::invalid_argument("uniformity_test: sample must be nonempty");
  std::vector<double> u(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) u[i] = angles[i] / (2.0 * std::numbers::pi);
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, (i + 1) / n - u[i], u[i] - i / n});
  }
  TestResult r;
  r.method = TestMethod::KolmogorovSmirnov;
  r.statistic = d;
  const double root = std::sqrt(n);
  r.p_value = kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
  return r;
}

TestResult chi_square_gof(const std::vector<int>& observations, const std::vector<double>& pmf) {
  if (observations.empty() || pmf.empty()) throw std::invalid_argument("chi_square_gof: empty input");
  std::vector<double> observed(pmf.size(), 0.0);
  for (int x : observations) {
    if (x < 0 || static_cast<std::size_t>(x) >= pmf.size()) {
      throw std::invalid_argument("chi_square_gof: observation outside the pmf support");
    }
    observed[static_cast<std::size_t>(x)] += 1.0;
  }
  const double n = static_cast<double>(observations.size());
  std::vector<double> cum_p(pmf.size() + 1, 0.0);
  std::vector<double> cum_o(pmf.size() + 1, 0.0);
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    cum_p[i + 1] = cum_p[i] + pmf[i];
    cum_o[i + 1] = cum_o[i] + observed[i];
  }
  const auto ends = merge_boundaries(pmf.size(), [&](std::size_t lo, std::size_t hi) {
    return n * (cum_p[hi] - cum_p[lo]) >= kMinExpected;
  });
  TestResult r;
  r.method = TestMethod::ChiSquare;
  std::size_t lo = 0;
  for (std::size_t hi : ends) {
    const double expected = n * (cum_p[hi] - cum_p[lo]);
    const double obs = cum_o[hi] - cum_o[lo];
    if (expected > 0.0) r.statistic += (obs - expected) * (obs - expected) / expected;
    lo = hi;
  }
  r.df = static_cast<int>(ends.size()) - 1;
  r.p_value = r.df < 1 ? 1.0 : chi_square_survival(r.statistic, r.df);
  return r;
}

std::vector<double> binomial_pmf(int n, double q) {
  if (n < 0 || !(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binomial_pmf: bad parameters");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    out[static_cast<std::size_t>(k)] = std::exp(log_choose) * std::pow(q, k) * std::pow(1.0 - q, n - k);
  }
  return out;
}

MomentSummary summarize(const std::vector<double>& xs) {
  MomentSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / n;
  if (xs.size() < 2) return s;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double d = x - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  s.variance = m2 / (n - 1.0);
  const double mu2 = m2 / n;
  const double mu4 = m4 / n;
  // Large-sample standard error of the sample variance.
  s.variance_se = std::sqrt(std::max(0.0, (mu4 - mu2 * mu2 * (n - 3.0) / (n - 1.0)) / n));
  return s;
}

}  // namespace smlab

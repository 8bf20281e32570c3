#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smlab/dpp.hpp"
#include "smlab/quadrature.hpp"
#include "smlab/spectral.hpp"
#include "smlab/stats.hpp"

using namespace smlab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;

const KernelFamily kFamilies[] = {KernelFamily::Unitary, KernelFamily::SOEven, KernelFamily::SOOdd,
                                  KernelFamily::SONegOdd, KernelFamily::SpLike};

std::vector<double> grid(double top, int points) {
  std::vector<double> out;
  for (int i = 1; i <= points; ++i) out.push_back(top * i / points);
  return out;
}

// Gauss-Legendre rule on [a, b] from the Golub-Welsch eigenproblem.
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = jac(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    x[i] = 0.5 * (b - a) * es.eigenvalues()(i) + 0.5 * (a + b);
    w[i] = (b - a) * v * v;
  }
}

// Nystrom discretisation of the kernel restricted to [0, theta) with respect
// to dx / |Lambda|. For a finite-rank trigonometric kernel, a Gauss rule of
// enough nodes integrates the Gram entries exactly, so the spectra agree to
// rounding.
std::vector<double> nystrom_eigenvalues(const KernelSpec& k, double theta, int nodes) {
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(nodes, 0.0, theta, x, w);
  const double len = k.domain_length();
  Eigen::MatrixXcd a(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      // Points are strictly inside [0, theta) so kernel_eval's domain check holds.
      a(i, j) = std::sqrt(w[i] * w[j]) / len * kernel_eval(k, x[i], x[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + nodes);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  ev.resize(static_cast<std::size_t>(k.n));
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(KernelSpec, Domains) {
  EXPECT_DOUBLE_EQ(make_kernel(KernelFamily::Unitary, 3).domain_length(), kTwoPi);
  for (KernelFamily f : {KernelFamily::SOEven, KernelFamily::SOOdd, KernelFamily::SONegOdd, KernelFamily::SpLike}) {
    EXPECT_DOUBLE_EQ(make_kernel(f, 3).domain_length(), kPi);
  }
  EXPECT_THROW(make_kernel(KernelFamily::Unitary, 0), std::invalid_argument);
}

TEST(KernelSpec, GroupTable) {
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::Unitary, 5)), make_kernel(KernelFamily::Unitary, 5));
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::SpecialOrthogonal, 8)), make_kernel(KernelFamily::SOEven, 4));
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::SpecialOrthogonal, 9)), make_kernel(KernelFamily::SOOdd, 4));
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::NegOrthogonal, 9)), make_kernel(KernelFamily::SONegOdd, 4));
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::NegOrthogonal, 10)), make_kernel(KernelFamily::SpLike, 4));
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::Symplectic, 3)), make_kernel(KernelFamily::SpLike, 3));
  EXPECT_EQ(kernel_for_group(make_group(GroupFamily::Orthogonal, 8), -1), make_kernel(KernelFamily::SpLike, 3));
  EXPECT_THROW(kernel_for_group(make_group(GroupFamily::SpecialUnitary, 3)), std::invalid_argument);
}

TEST(KernelEval, DiagonalValues) {
  for (int n : {1, 4, 9}) {
    EXPECT_NEAR(kernel_eval(make_kernel(KernelFamily::Unitary, n), 0.7, 0.7).real(), n, 1e-12);
    EXPECT_NEAR(kernel_eval(make_kernel(KernelFamily::Unitary, n, KernelVariant::DirichletForm), 0.7, 0.7).real(), n,
                1e-12);
  }
  EXPECT_NEAR(kernel_eval(make_kernel(KernelFamily::SpLike, 1), kPi / 2, kPi / 2).real(), 2.0, 1e-12);
}

TEST(KernelEval, RejectsPointsOutsideDomain) {
  EXPECT_THROW(kernel_eval(make_kernel(KernelFamily::SOEven, 2), kPi, 0.1), std::out_of_range);
  EXPECT_THROW(kernel_eval(make_kernel(KernelFamily::Unitary, 2), -0.1, 0.1), std::out_of_range);
}

TEST(KernelEval, HermitianOrSymmetric) {
  for (KernelFamily f : kFamilies) {
    for (KernelVariant v : {KernelVariant::FourierSum, KernelVariant::DirichletForm}) {
      const KernelSpec k = make_kernel(f, 5, v);
      const auto a = kernel_eval(k, 0.4, 2.1);
      const auto b = kernel_eval(k, 2.1, 0.4);
      EXPECT_LT(std::abs(a - std::conj(b)), 1e-12);
      if (f != KernelFamily::Unitary) {
        EXPECT_EQ(a.imag(), 0.0);
      }
    }
  }
}

// -U carries SO(2N+1) onto SO-(2N+1) and sends each angle x to pi - x.
TEST(KernelEval, NegOddIsReflectedOdd) {
  for (int n : {1, 4, 9}) {
    const KernelSpec neg = make_kernel(KernelFamily::SONegOdd, n);
    const KernelSpec pos = make_kernel(KernelFamily::SOOdd, n);
    for (double x : {0.1, 0.9, 2.3}) {
      for (double y : {0.05, 1.7, 3.0}) {
        EXPECT_NEAR(kernel_eval(neg, x, y).real(), kernel_eval(pos, kPi - x, kPi - y).real(), 1e-12);
      }
    }
    for (double theta : grid(kPi, 16)) {
      EXPECT_NEAR(mean_count(neg, theta), n - mean_count(pos, kPi - theta), 1e-12);
    }
  }
}

TEST(SN, Examples) {
  for (int n : {1, 2, 7}) EXPECT_DOUBLE_EQ(s_n(n, 0.0), n);
  EXPECT_NEAR(s_n(2, kPi), 0.0, 1e-15);
  double termwise = 0.0;
  for (int j = 0; j <= 4; ++j) termwise += std::cos((j - 2) * 0.3);
  EXPECT_NEAR(s_n(5, 0.3), termwise, 1e-12);
}

TEST(SN, MatchesTermwiseSumEverywhere) {
  for (int n : {1, 2, 3, 6, 11, 64}) {
    for (double x : {1e-12, 1e-9, 1e-7, 0.01, 1.0, 3.0, kTwoPi - 1e-10, kTwoPi, 4 * kPi + 1e-11, -2.5}) {
      double termwise = 0.0;
      for (int j = 0; j < n; ++j) termwise += std::cos((j - 0.5 * (n - 1)) * x);
      EXPECT_NEAR(s_n(n, x), termwise, 1e-9 * n) << "n=" << n << " x=" << x;
    }
  }
}

TEST(RestrictionEigenvalues, RankOneUnitary) {
  for (double theta : {0.3, 2.0, 5.5}) {
    const BernoulliProfile p = restriction_eigenvalues(make_kernel(KernelFamily::Unitary, 1), theta);
    ASSERT_EQ(p.lambdas.size(), 1u);
    EXPECT_NEAR(p.lambdas[0], theta / kTwoPi, 1e-14);
  }
}

TEST(RestrictionEigenvalues, FullDomainGivesOnes) {
  for (KernelFamily f : kFamilies) {
    const KernelSpec k = make_kernel(f, 6);
    for (double l : restriction_eigenvalues(k, k.domain_length()).lambdas) EXPECT_NEAR(l, 1.0, 1e-12);
  }
}

TEST(RestrictionEigenvalues, HalfCircleTrace) {
  EXPECT_NEAR(restriction_eigenvalues(make_kernel(KernelFamily::Unitary, 4), kPi).sum(), 2.0, 1e-10);
}

TEST(RestrictionEigenvalues, RejectsBadTheta) {
  EXPECT_THROW(restriction_eigenvalues(make_kernel(KernelFamily::Unitary, 4), 0.0), std::out_of_range);
  EXPECT_THROW(restriction_eigenvalues(make_kernel(KernelFamily::Unitary, 4), -1.0), std::out_of_range);
  EXPECT_THROW(restriction_eigenvalues(make_kernel(KernelFamily::SOEven, 4), 4.0), std::out_of_range);
}

TEST(RestrictionEigenvalues, MatchNystromOracle) {
  for (KernelFamily f : kFamilies) {
    for (int n : {1, 3, 8}) {
      const KernelSpec k = make_kernel(f, n);
      for (double frac : {0.1, 0.37, 0.5, 0.9}) {
        const double theta = frac * k.domain_length();
        const auto ours = sorted(restriction_eigenvalues(k, theta).lambdas);
        const auto oracle = nystrom_eigenvalues(k, theta, 4 * n + 40);
        ASSERT_EQ(ours.size(), oracle.size());
        for (std::size_t i = 0; i < ours.size(); ++i) EXPECT_NEAR(ours[i], oracle[i], 1e-10);
      }
    }
  }
}

TEST(RestrictionEigenvalues, KernelVariantsGenerateSameSpectrum) {
  for (int n : {2, 5, 12}) {
    for (double theta : {0.4, 2.0, 4.4}) {
      const auto fourier = nystrom_eigenvalues(make_kernel(KernelFamily::Unitary, n), theta, 4 * n + 40);
      const auto dirichlet =
          nystrom_eigenvalues(make_kernel(KernelFamily::Unitary, n, KernelVariant::DirichletForm), theta, 4 * n + 40);
      const auto gram = sorted(
          restriction_eigenvalues(make_kernel(KernelFamily::Unitary, n, KernelVariant::DirichletForm), theta).lambdas);
      for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(fourier[i], dirichlet[i], 1e-8);
        EXPECT_NEAR(gram[i], fourier[i], 1e-8);
      }
    }
  }
}

TEST(RestrictionEigenvalues, ClampIsNegligible) {
  for (KernelFamily f : kFamilies) {
    for (int n : {1, 16, 64}) {
      const KernelSpec k = make_kernel(f, n);
      for (double theta : grid(k.domain_length(), 32)) {
        const BernoulliProfile p = restriction_eigenvalues(k, theta);
        EXPECT_LE(p.max_clamp, 1e-10);
        for (double l : p.lambdas) {
          EXPECT_GE(l, 0.0);
          EXPECT_LE(l, 1.0);
        }
      }
    }
  }
}

TEST(MeanCount, TraceIdentityOnGrid) {
  for (KernelFamily f : kFamilies) {
    for (int n = 1; n <= 64; n += (n < 8 ? 1 : 7)) {
      const KernelSpec k = make_kernel(f, n);
      for (double theta : grid(k.domain_length(), 32)) {
        EXPECT_NEAR(restriction_eigenvalues(k, theta).sum(), mean_count(k, theta), 1e-9);
      }
    }
  }
}

TEST(MeanCount, ClosedFormsMatchQuadrature) {
  EXPECT_NEAR(mean_count(make_kernel(KernelFamily::SOEven, 3), 1.0),
              mean_count_by_quadrature(make_kernel(KernelFamily::SOEven, 3), 1.0), 1e-9);
  for (KernelFamily f : kFamilies) {
    for (int n : {1, 2, 5, 13}) {
      const KernelSpec k = make_kernel(f, n);
      for (double theta : grid(k.domain_length(), 7)) {
        EXPECT_NEAR(mean_count(k, theta), mean_count_by_quadrature(k, theta), 1e-9);
      }
    }
  }
}

TEST(MeanCount, Examples) {
  for (int n : {1, 5, 40}) {
    EXPECT_NEAR(mean_count(make_kernel(KernelFamily::Unitary, n), 1.3), n * 1.3 / kTwoPi, 1e-13);
    EXPECT_NEAR(mean_count(make_kernel(KernelFamily::SpLike, n), kPi), n, 1e-12);
  }
}

TEST(MeanCount, NondecreasingInTheta) {
  for (KernelFamily f : kFamilies) {
    const KernelSpec k = make_kernel(f, 9);
    double last = 0.0;
    for (double theta : grid(k.domain_length(), 200)) {
      const double v = mean_count(k, theta);
      EXPECT_GE(v, last - 1e-12);
      last = v;
    }
  }
}

TEST(MeanCount, WithinOneOfLinearForNonUnitaryRows) {
  for (KernelFamily f : {KernelFamily::SOEven, KernelFamily::SOOdd, KernelFamily::SONegOdd, KernelFamily::SpLike}) {
    for (int n = 1; n <= 64; ++n) {
      for (double theta : grid(kPi, 32)) EXPECT_LT(std::abs(mean_count(make_kernel(f, n), theta) - n * theta / kPi), 1.0);
    }
  }
}

TEST(VarianceCount, FullDomainIsZero) {
  for (KernelFamily f : kFamilies) {
    const KernelSpec k = make_kernel(f, 4);
    EXPECT_EQ(variance_count(k, k.domain_length()), 0.0);
  }
}

TEST(VarianceCount, MatchesBernoulliProfile) {
  EXPECT_NEAR(variance_count(make_kernel(KernelFamily::Unitary, 8), kPi / 2),
              restriction_eigenvalues(make_kernel(KernelFamily::Unitary, 8), kPi / 2).variance(), 1e-6);
  for (KernelFamily f : kFamilies) {
    for (int n : {1, 3, 10, 24}) {
      const KernelSpec k = make_kernel(f, n);
      for (double theta : grid(k.domain_length(), 8)) {
        EXPECT_NEAR(variance_count(k, theta), restriction_eigenvalues(k, theta).variance(), 1e-6)
            << "family " << static_cast<int>(f) << " n=" << n << " theta=" << theta;
      }
    }
  }
}

TEST(VarianceCount, UnitaryLogBound) {
  for (int n = 2; n <= 256; n *= 2) {
    const KernelSpec k = make_kernel(KernelFamily::Unitary, n);
    for (double theta : grid(kTwoPi, 16)) EXPECT_LE(variance_count(k, theta), std::log(n) + 1.0);
  }
}

TEST(PowerMoments, FullPowerIsRankOne) {
  const int n = 9;
  for (double theta : {0.5, 3.0}) {
    const PowerMoments pm = power_count_moments(n, n, theta);
    const double q = theta / kTwoPi;
    EXPECT_NEAR(pm.variance, n * q * (1 - q), 1e-10);
    EXPECT_NEAR(pm.mean, n * q, 1e-13);
  }
}

TEST(PowerMoments, Examples) {
  EXPECT_NEAR(power_count_moments(6, 2, kPi).mean, 3.0, 1e-13);
  EXPECT_THROW(power_count_moments(3, 4, 1.0), std::invalid_argument);
}

TEST(PowerMoments, VarianceBelowBound) {
  for (int n = 1; n <= 24; ++n) {
    for (int m = 1; m <= n; ++m) {
      for (double theta : {0.7, kPi, 5.0}) {
        const PowerMoments pm = power_count_moments(n, m, theta);
        EXPECT_LE(pm.variance, pm.variance_bound);
        EXPECT_NEAR(pm.variance_bound, m * (std::log(double(n) / m) + 1), 1e-12);
      }
    }
  }
}

TEST(PowerMoments, MonteCarloVarianceAgrees) {
  RngStream rng(1, 0);
  const int reps = 10000;
  std::vector<double> counts;
  for (int i = 0; i < reps; ++i) counts.push_back(counting_function(sample_power_spectrum_rains(8, 2, rng), 1.0));
  const MomentSummary s = summarize(counts);
  EXPECT_LT(std::abs(s.variance - power_count_moments(8, 2, 1.0).variance), 3 * s.variance_se);
}

TEST(BernoulliProfilePower, Examples) {
  const BernoulliProfile full = bernoulli_profile_power(6, 6, 2.0);
  ASSERT_EQ(full.lambdas.size(), 6u);
  for (double l : full.lambdas) EXPECT_NEAR(l, 2.0 / kTwoPi, 1e-14);
  EXPECT_EQ(bernoulli_profile_power(5, 2, 1.0).lambdas.size(), 5u);
  EXPECT_NEAR(bernoulli_profile_power(7, 3, 2.0).sum(), 7 * 2.0 / kTwoPi, 1e-10);
}

TEST(SampleCountBernoulli, DegenerateProfiles) {
  RngStream rng(2, 0);
  BernoulliProfile zeros;
  zeros.lambdas.assign(5, 0.0);
  BernoulliProfile ones;
  ones.lambdas.assign(5, 1.0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_count_bernoulli(zeros, rng), 0);
    EXPECT_EQ(sample_count_bernoulli(ones, rng), 5);
  }
}

TEST(SampleCountBernoulli, MatchesDirectCountsEveryFamily) {
  RngStream rng(3, 0);
  const std::vector<GroupSpec> groups = {
      make_group(GroupFamily::Unitary, 8),       make_group(GroupFamily::SpecialOrthogonal, 6),
      make_group(GroupFamily::SpecialOrthogonal, 7), make_group(GroupFamily::NegOrthogonal, 7),
      make_group(GroupFamily::NegOrthogonal, 8), make_group(GroupFamily::Symplectic, 3),
  };
  for (const GroupSpec& g : groups) {
    const KernelSpec k = kernel_for_group(g);
    const double theta = g.family == GroupFamily::Unitary ? kPi : kPi / 2;
    const BernoulliProfile prof = restriction_eigenvalues(k, theta);
    std::vector<int> direct;
    std::vector<int> bern;
    for (int i = 0; i < 10000; ++i) {
      const AngleSet a = eigenangles(sample_haar(g, rng));
      direct.push_back(a.classified ? nontrivial_counting_function(a, theta) : counting_function(a, theta));
      bern.push_back(sample_count_bernoulli(prof, rng));
    }
    EXPECT_GT(two_sample_count_test(direct, bern).p_value, 1e-3) << describe(g);
  }
}

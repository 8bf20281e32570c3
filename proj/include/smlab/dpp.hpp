#pragma once

#include <complex>
#include <vector>

#include "smlab/group_sampler.hpp"
#include "smlab/rng.hpp"

namespace smlab {

/// Rows of the determinantal kernel tables for nontrivial eigenvalue angles.
enum class KernelFamily {
  Unitary,  ///< U(N), domain [0, 2pi)
  SOEven,   ///< SO(2N), domain [0, pi)
  SOOdd,    ///< SO(2N+1), domain [0, pi)
  SONegOdd, ///< SO-(2N+1): the SO(2N+1) row reflected by x -> pi - x
  SpLike,   ///< Sp(N) and SO-(2N+2), domain [0, pi)
};

/// Which closed form to evaluate: the orthonormal-basis sum or the
/// Dirichlet-kernel (S_N) form. For the unitary row the two kernels differ
/// by a phase conjugation but generate the same process; for the other rows
/// they coincide.
enum class KernelVariant { FourierSum, DirichletForm };

struct KernelSpec {
  KernelFamily family = KernelFamily::Unitary;
  KernelVariant variant = KernelVariant::FourierSum;
  int n = 1;  ///< rank of the projection (number of basis functions)

  /// |Lambda|: 2pi for the unitary row, pi otherwise. Lambda = [0, |Lambda|).
  double domain_length() const;
  bool operator==(const KernelSpec&) const = default;
};

KernelSpec make_kernel(KernelFamily family, int n,
                       KernelVariant variant = KernelVariant::FourierSum);

/// Kernel row and rank governing the nontrivial angles of a group sample.
/// `det_sign` picks the coset for O(N). SU(N) is not determinantal with
/// these kernels and is rejected.
KernelSpec kernel_for_group(const GroupSpec& spec, int det_sign = 1);

/// Eigenvalues of the kernel restricted to D = [0, theta), one independent
/// Bernoulli parameter per entry.
struct BernoulliProfile {
  std::vector<double> lambdas;
  KernelSpec kernel;
  double theta = 0.0;
  double max_clamp = 0.0;  ///< largest adjustment made when clamping into [0, 1]

  double sum() const;
  double variance() const;  ///< sum lambda (1 - lambda)
};

/// S_N(x) = sin(N x / 2) / sin(x / 2), filled in by continuity (value
/// +-N) where sin(x/2) vanishes.
double s_n(int n, double x);

std::complex<double> kernel_eval(const KernelSpec& k, double x, double y);

BernoulliProfile restriction_eigenvalues(const KernelSpec& k, double theta);

int sample_count_bernoulli(const BernoulliProfile& p, RngStream& rng);

/// Expected number of points in [0, theta), closed form.
double mean_count(const KernelSpec& k, double theta);
/// Same quantity by adaptive quadrature of the kernel diagonal.
double mean_count_by_quadrature(const KernelSpec& k, double theta);

/// Variance of the number of points in [0, theta) from the double integral
/// of K(x,y)^2 over D x (Lambda \ D).
double variance_count(const KernelSpec& k, double theta);

struct PowerMoments {
  double mean = 0.0;
  double variance = 0.0;
  double variance_bound = 0.0;  ///< m (log(N/m) + 1)
};

/// Mean and variance of the number of eigenangles of U^m in [0, theta) for
/// U Haar on U(N), via the independent unitary blocks.
PowerMoments power_count_moments(int n, int m, double theta);

BernoulliProfile bernoulli_profile_power(int n, int m, double theta);

}  // namespace smlab

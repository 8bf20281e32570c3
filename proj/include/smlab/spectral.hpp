#pragma once

#include <complex>
#include <vector>

#include "smlab/group_sampler.hpp"
#include "smlab/rng.hpp"

namespace smlab {

/// Eigenvalue angles of a unitary matrix, sorted ascending in [0, 2pi).
///
/// For orthogonal and symplectic origins the forced eigenvalues +1 / -1
/// ("trivial" eigenvalues) are counted separately and the nontrivial angles
/// in the upper half circle are listed in `nontrivial_upper`. Unitary-type
/// sets, and every set produced by `power_angles`, carry no classification.
struct AngleSet {
  std::vector<double> angles;
  int trivial_count_plus = 0;
  int trivial_count_minus = 0;
  std::vector<double> nontrivial_upper;
  GroupSpec spec;
  /// +1 / -1 for orthogonal-type origins, 0 otherwise. Selects the SO or SO-
  /// row of the kernel tables for O(N) samples.
  int determinant_sign = 0;
  bool classified = false;

  std::size_t size() const { return angles.size(); }
};

struct EmpiricalSpectralMeasure {
  std::vector<std::complex<double>> atoms;
  double weight = 0.0;  ///< uniform, 1 / atoms.size()
};

EmpiricalSpectralMeasure spectral_measure(const AngleSet& a);

/// Normalise an angle into [0, 2pi).
double wrap_angle(double theta);

/// Build an unclassified (unitary-type) set from raw angles.
AngleSet make_angle_set(std::vector<double> angles, GroupSpec spec);

/// Eigenvalue angles of M with trivial eigenvalues classified per family.
/// Throws std::domain_error if any eigenvalue modulus deviates from 1 by more
/// than 1e-6 or a forced trivial eigenvalue cannot be found.
AngleSet eigenangles(const MatrixSample& m);

/// Angles of the m-th power: (m theta) mod 2pi, re-sorted, tagged unitary.
AngleSet power_angles(const AngleSet& a, int m);

/// Number of angles in [0, theta), theta in [0, 2pi].
int counting_function(const AngleSet& a, double theta);

/// Number of nontrivial upper-half-circle angles in [0, theta), theta in [0, pi].
/// Throws std::invalid_argument for unclassified (unitary-type) sets.
int nontrivial_counting_function(const AngleSet& a, double theta);

/// Sizes ceil((N - j) / m), j = 0..m-1, of the independent unitary blocks
/// whose joint spectrum matches that of U^m for U Haar on U(N).
std::vector<int> rains_block_sizes(int n, int m);

/// Spectrum of U^m for Haar U in U(N), drawn from the block model for
/// m <= N and as N i.i.d. uniform angles for m > N.
AngleSet sample_power_spectrum_rains(int n, int m, RngStream& rng);

}  // namespace smlab

#include "smlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace smlab {

namespace {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kModulusTol = 1e-6;
constexpr double kTrivialTol = 1e-6;

struct TrivialTable {
  int plus = 0;
  int minus = 0;
};

TrivialTable trivial_table(const GroupSpec& spec, int det_sign) {
  const int n = spec.rank;
  switch (spec.family) {
    case GroupFamily::SpecialOrthogonal:
      return {n % 2 == 1 ? 1 : 0, 0};
    case GroupFamily::NegOrthogonal:
      return n % 2 == 1 ? TrivialTable{0, 1} : TrivialTable{1, 1};
    case GroupFamily::Orthogonal:
      if (det_sign > 0) return {n % 2 == 1 ? 1 : 0, 0};
      return n % 2 == 1 ? TrivialTable{0, 1} : TrivialTable{1, 1};
    default:
      return {};
  }
}

std::vector<Complex> eigenvalues_of(const MatrixSample& m) {
  std::vector<Complex> out;
  if (m.spec.is_orthogonal_type()) {
    Eigen::EigenSolver<RealMatrix> solver(m.entries.real(), false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenangles: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m.entries, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenangles: eigensolver failed");
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  }
  return out;
}

}  // namespace

double wrap_angle(double theta) {
  double a = std::fmod(theta, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

EmpiricalSpectralMeasure spectral_measure(const AngleSet& a) {
  EmpiricalSpectralMeasure mu;
  mu.atoms.reserve(a.size());
  for (double t : a.angles) mu.atoms.push_back(std::polar(1.0, t));
  mu.weight = a.angles.empty() ? 0.0 : 1.0 / static_cast<double>(a.size());
  return mu;
}

AngleSet make_angle_set(std::vector<double> angles, GroupSpec spec) {
  AngleSet out;
  for (double& t : angles) t = wrap_angle(t);
  std::stable_sort(angles.begin(), angles.end());
  out.angles = std::move(angles);
  out.spec = spec;
  return out;
}

AngleSet eigenangles(const MatrixSample& m) {
  std::vector<Complex> values = eigenvalues_of(m);
  for (Complex& z : values) {
    const double mod = std::abs(z);
    if (!(std::abs(mod - 1.0) <= kModulusTol)) {
      throw std::domain_error("eigenangles: eigenvalue modulus " + std::to_string(mod) +
                              " is not on the unit circle");
    }
    z /= mod;
  }

  AngleSet out;
  out.spec = m.spec;
  if (m.spec.is_orthogonal_type()) {
    Complex det(1.0, 0.0);
    for (const Complex& z : values) det *= z;
    out.determinant_sign = det.real() >= 0.0 ? 1 : -1;
  }
  const TrivialTable table = trivial_table(m.spec, out.determinant_sign);

  std::vector<bool> trivial(values.size(), false);
  std::vector<double> all;
  all.reserve(values.size());
  auto claim = [&](double target, double snapped) {
    std::size_t best = values.size();
    double best_dist = kTrivialTol;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (trivial[i]) continue;
      const double d = std::abs(values[i] - Complex(target, 0.0));
      if (d <= best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (best == values.size()) {
      throw std::domain_error("eigenangles: forced eigenvalue " + std::to_string(target) +
                              " missing for " + describe(m.spec));
    }
    trivial[best] = true;
    all.push_back(snapped);
  };
  for (int i = 0; i < table.plus; ++i) claim(1.0, 0.0);
  for (int i = 0; i < table.minus; ++i) claim(-1.0, std::numbers::pi);
  out.trivial_count_plus = table.plus;
  out.trivial_count_minus = table.minus;

  std::vector<double> nontrivial;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (trivial[i]) continue;
    nontrivial.push_back(wrap_angle(std::arg(values[i])));
  }
  std::stable_sort(nontrivial.begin(), nontrivial.end());
  all.insert(all.end(), nontrivial.begin(), nontrivial.end());
  std::stable_sort(all.begin(), all.end());
  out.angles = std::move(all);

  if (m.spec.is_orthogonal_type() || m.spec.family == GroupFamily::Symplectic) {
    if (nontrivial.size() % 2 != 0) {
      throw std::domain_error("eigenangles: nontrivial eigenvalues do not pair up for " +
                              describe(m.spec));
    }
    // Conjugate pairs theta, 2pi - theta: the lower half of the sorted list
    // is the upper half circle.
    out.nontrivial_upper.assign(nontrivial.begin(),
                                nontrivial.begin() + static_cast<std::ptrdiff_t>(nontrivial.size() / 2));
    out.classified = true;
  }
  return out;
}

AngleSet power_angles(const AngleSet& a, int m) {
  if (m < 1) throw std::invalid_argument("power_angles: m must be >= 1");
  std::vector<double> powered;
  powered.reserve(a.size());
  for (double t : a.angles) powered.push_back(wrap_angle(static_cast<double>(m) * t));
  const int size = static_cast<int>(a.size());
  return make_angle_set(std::move(powered), GroupSpec{GroupFamily::Unitary, std::max(size, 1)});
}

int counting_function(const AngleSet& a, double theta) {
  if (!(theta >= 0.0 && theta <= kTwoPi)) {
    throw std::out_of_range("counting_function: theta must lie in [0, 2pi]");
  }
  return static_cast<int>(std::lower_bound(a.angles.begin(), a.angles.end(), theta) -
                          a.angles.begin());
}

int nontrivial_counting_function(const AngleSet& a, double theta) {
  if (!a.classified) {
    throw std::invalid_argument(
        "nontrivial_counting_function: requires an orthogonal or symplectic angle set");
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw std::out_of_range("nontrivial_counting_function: theta must lie in [0, pi]");
  }
  return static_cast<int>(std::lower_bound(a.nontrivial_upper.begin(), a.nontrivial_upper.end(),
                                           theta) -
                          a.nontrivial_upper.begin());
}

std::vector<int> rains_block_sizes(int n, int m) {
  if (m < 1 || m > n) throw std::invalid_argument("rains_block_sizes: requires 1 <= m <= N");
  std::vector<int> sizes;
  sizes.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) sizes.push_back((n - j + m - 1) / m);
  return sizes;
}

AngleSet sample_power_spectrum_rains(int n, int m, RngStream& rng) {
  if (n < 1 || m < 1) throw std::invalid_argument("sample_power_spectrum_rains: N, m must be >= 1");
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(n));
  if (m > n) {
    for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0.0, kTwoPi));
  } else {
    for (int size : rains_block_sizes(n, m)) {
      const AngleSet block = eigenangles(sample_haar(make_group(GroupFamily::Unitary, size), rng));
      angles.insert(angles.end(), block.angles.begin(), block.angles.end());
    }
  }
  return make_angle_set(std::move(angles), make_group(GroupFamily::Unitary, n));
}

}  // namespace smlab

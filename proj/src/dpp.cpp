#include "smlab/dpp.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "smlab/quadrature.hpp"
#include "smlab/spectral.hpp"

namespace smlab {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSeriesThreshold = 1e-8;
constexpr double kClampTol = 1e-10;

// One orthonormal basis function of a kernel: coef * {e^{i w x}, cos(w x), sin(w x)}.
struct BasisFunction {
  enum class Kind { Exp, Cos, Sin } kind;
  double freq;
  double coef;
};

std::vector<BasisFunction> basis_of(const KernelSpec& k) {
  std::vector<BasisFunction> basis;
  basis.reserve(static_cast<std::size_t>(k.n));
  const double root2 = std::numbers::sqrt2;
  switch (k.family) {
    case KernelFamily::Unitary: {
      // The Dirichlet form S_N(x - y) is the Fourier sum with frequencies
      // shifted by (N - 1) / 2.
      const double shift = k.variant == KernelVariant::DirichletForm ? 0.5 * (k.n - 1) : 0.0;
      for (int j = 0; j < k.n; ++j) basis.push_back({BasisFunction::Kind::Exp, j - shift, 1.0});
      break;
    }
    case KernelFamily::SOEven:
      basis.push_back({BasisFunction::Kind::Cos, 0.0, 1.0});
      for (int j = 1; j < k.n; ++j) basis.push_back({BasisFunction::Kind::Cos, double(j), root2});
      break;
    case KernelFamily::SOOdd:
      for (int j = 0; j < k.n; ++j) basis.push_back({BasisFunction::Kind::Sin, j + 0.5, root2});
      break;
    case KernelFamily::SONegOdd:
      for (int j = 0; j < k.n; ++j) basis.push_back({BasisFunction::Kind::Cos, j + 0.5, root2});
      break;
    case KernelFamily::SpLike:
      for (int j = 1; j <= k.n; ++j) basis.push_back({BasisFunction::Kind::Sin, double(j), root2});
      break;
  }
  return basis;
}

// Integrals over [0, theta) of cos(d x) and sin(d x).
struct ArcIntegrals {
  double theta;
  double cos_int(double d) const { return d == 0.0 ? theta : std::sin(d * theta) / d; }
  double sin_int(double d) const {
    if (d == 0.0) return 0.0;
    const double s = std::sin(0.5 * d * theta);
    return 2.0 * s * s / d;
  }
};

// Integral of phi_j conj(phi_l) over [0, theta) (unnormalised measure dx).
Complex gram_entry(const BasisFunction& a, const BasisFunction& b, const ArcIntegrals& arc) {
  using K = BasisFunction::Kind;
  const double c = a.coef * b.coef;
  const double dm = a.freq - b.freq;
  const double dp = a.freq + b.freq;
  if (a.kind == K::Exp && b.kind == K::Exp) {
    return c * Complex(arc.cos_int(dm), arc.sin_int(dm));
  }
  if (a.kind == K::Cos && b.kind == K::Cos) return c * 0.5 * (arc.cos_int(dm) + arc.cos_int(dp));
  if (a.kind == K::Sin && b.kind == K::Sin) return c * 0.5 * (arc.cos_int(dm) - arc.cos_int(dp));
  if (a.kind == K::Cos && b.kind == K::Sin) return c * 0.5 * (arc.sin_int(dp) - arc.sin_int(dm));
  if (a.kind == K::Sin && b.kind == K::Cos) return c * 0.5 * (arc.sin_int(dp) + arc.sin_int(dm));
  throw std::logic_error("gram_entry: mixed exponential and trigonometric basis");
}

// Kernel value without domain checks; quadrature calls this on the open
// interior of the domain.
Complex kernel_value(const KernelSpec& k, double x, double y) {
  const int n = k.n;
  if (k.variant == KernelVariant::DirichletForm) {
    switch (k.family) {
      case KernelFamily::Unitary: return s_n(n, x - y);
      case KernelFamily::SOEven: return 0.5 * (s_n(2 * n - 1, x - y) + s_n(2 * n - 1, x + y));
      case KernelFamily::SOOdd: return 0.5 * (s_n(2 * n, x - y) - s_n(2 * n, x + y));
      case KernelFamily::SONegOdd: return 0.5 * (s_n(2 * n, x - y) + s_n(2 * n, x + y));
      case KernelFamily::SpLike: return 0.5 * (s_n(2 * n + 1, x - y) - s_n(2 * n + 1, x + y));
    }
  }
  switch (k.family) {
    case KernelFamily::Unitary: {
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) sum += std::polar(1.0, j * (x - y));
      return sum;
    }
    case KernelFamily::SOEven: {
      double sum = 1.0;
      for (int j = 1; j < n; ++j) sum += 2.0 * std::cos(j * x) * std::cos(j * y);
      return sum;
    }
    case KernelFamily::SOOdd: {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += 2.0 * std::sin((j + 0.5) * x) * std::sin((j + 0.5) * y);
      return sum;
    }
    case KernelFamily::SONegOdd: {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += 2.0 * std::cos((j + 0.5) * x) * std::cos((j + 0.5) * y);
      return sum;
    }
    case KernelFamily::SpLike: {
      double sum = 0.0;
      for (int j = 1; j <= n; ++j) sum += 2.0 * std::sin(j * x) * std::sin(j * y);
      return sum;
    }
  }
  return 0.0;
}

void check_theta(const KernelSpec& k, double theta, const char* what) {
  if (!(theta >= 0.0 && theta <= k.domain_length())) {
    throw std::out_of_range(std::string(what) + ": theta must lie in [0, |Lambda|]");
  }
}

}  // namespace

double KernelSpec::domain_length() const { return family == KernelFamily::Unitary ? kTwoPi : kPi; }

KernelSpec make_kernel(KernelFamily family, int n, KernelVariant variant) {
  if (n < 1) throw std::invalid_argument("KernelSpec: rank must be >= 1");
  return KernelSpec{family, variant, n};
}

KernelSpec kernel_for_group(const GroupSpec& spec, int det_sign) {
  const int n = spec.rank;
  auto checked = [&](KernelFamily f, int rank) {
    if (rank < 1) {
      throw std::invalid_argument(describe(spec) + " has no nontrivial eigenvalue angles");
    }
    return make_kernel(f, rank);
  };
  switch (spec.family) {
    case GroupFamily::Unitary: return checked(KernelFamily::Unitary, n);
    case GroupFamily::SpecialUnitary:
      throw std::invalid_argument("SU(N) eigenangles are not covered by the kernel tables");
    case GroupFamily::Symplectic: return checked(KernelFamily::SpLike, n);
    case GroupFamily::SpecialOrthogonal:
      return n % 2 == 0 ? checked(KernelFamily::SOEven, n / 2) : checked(KernelFamily::SOOdd, (n - 1) / 2);
    case GroupFamily::NegOrthogonal:
      return n % 2 == 0 ? checked(KernelFamily::SpLike, (n - 2) / 2)
                        : checked(KernelFamily::SONegOdd, (n - 1) / 2);
    case GroupFamily::Orthogonal:
      if (det_sign == 0) throw std::invalid_argument("kernel_for_group: O(N) requires a coset sign");
      return kernel_for_group(
          GroupSpec{det_sign > 0 ? GroupFamily::SpecialOrthogonal : GroupFamily::NegOrthogonal, n});
  }
  throw std::invalid_argument("kernel_for_group: unknown family");
}

double BernoulliProfile::sum() const {
  double s = 0.0;
  for (double l : lambdas) s += l;
  return s;
}

double BernoulliProfile::variance() const {
  double s = 0.0;
  for (double l : lambdas) s += l * (1.0 - l);
  return s;
}

double s_n(int n, double x) {
  const double half_sin = std::sin(0.5 * x);
  if (std::abs(half_sin) < kSeriesThreshold) {
    double sum = 0.0;
    const double centre = 0.5 * (n - 1);
    for (int j = 0; j < n; ++j) sum += std::cos((j - centre) * x);
    return sum;
  }
  return std::sin(0.5 * n * x) / half_sin;
}

std::complex<double> kernel_eval(const KernelSpec& k, double x, double y) {
  const double len = k.domain_length();
  if (!(x >= 0.0 && x < len && y >= 0.0 && y < len)) {
    throw std::out_of_range("kernel_eval: arguments must lie in Lambda");
  }
  return kernel_value(k, x, y);
}

BernoulliProfile restriction_eigenvalues(const KernelSpec& k, double theta) {
  if (!(theta > 0.0)) throw std::out_of_range("restriction_eigenvalues: theta must be positive");
  check_theta(k, theta, "restriction_eigenvalues");

  const std::vector<BasisFunction> basis = basis_of(k);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const ArcIntegrals arc{theta};
  const double norm = 1.0 / k.domain_length();

  Eigen::VectorXd values;
  if (k.family == KernelFamily::Unitary) {
    ComplexMatrix gram(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) gram(j, l) = norm * gram_entry(basis[j], basis[l], arc);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram, Eigen::EigenvaluesOnly);
    values = solver.eigenvalues();
  } else {
    RealMatrix gram(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) gram(j, l) = norm * gram_entry(basis[j], basis[l], arc).real();
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(gram, Eigen::EigenvaluesOnly);
    values = solver.eigenvalues();
  }

  BernoulliProfile profile;
  profile.kernel = k;
  profile.theta = theta;
  profile.lambdas.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double raw = values(i);
    const double clamped = std::clamp(raw, 0.0, 1.0);
    profile.max_clamp = std::max(profile.max_clamp, std::abs(raw - clamped));
    profile.lambdas.push_back(clamped);
  }
  if (profile.max_clamp > kClampTol) {
    throw std::runtime_error("restriction_eigenvalues: eigenvalue left [0, 1] by " +
                             std::to_string(profile.max_clamp));
  }
  return profile;
}

int sample_count_bernoulli(const BernoulliProfile& p, RngStream& rng) {
  int count = 0;
  for (double l : p.lambdas) {
    if (rng.uniform() < l) ++count;
  }
  return count;
}

double mean_count(const KernelSpec& k, double theta) {
  check_theta(k, theta, "mean_count");
  const double n = k.n;
  double sum = 0.0;
  switch (k.family) {
    case KernelFamily::Unitary:
      return n * theta / kTwoPi;
    case KernelFamily::SOEven:
      for (int j = 1; j < k.n; ++j) sum += std::sin(2.0 * j * theta) / j;
      return n * theta / kPi + sum / kTwoPi;
    case KernelFamily::SOOdd:
      for (int j = 0; j < k.n; ++j) sum += std::sin((2.0 * j + 1.0) * theta) / (2.0 * j + 1.0);
      return n * theta / kPi - sum / kPi;
    case KernelFamily::SONegOdd:
      for (int j = 0; j < k.n; ++j) sum += std::sin((2.0 * j + 1.0) * theta) / (2.0 * j + 1.0);
      return n * theta / kPi + sum / kPi;
    case KernelFamily::SpLike:
      for (int j = 1; j <= k.n; ++j) sum += std::sin(2.0 * j * theta) / j;
      return n * theta / kPi - sum / kTwoPi;
  }
  return 0.0;
}

double mean_count_by_quadrature(const KernelSpec& k, double theta) {
  check_theta(k, theta, "mean_count_by_quadrature");
  const std::function<double(double)> diag = [&k](double x) { return kernel_value(k, x, x).real(); };
  return integrate_adaptive(diag, 0.0, theta, {.abs_tol = 1e-11, .rel_tol = 1e-13}).value /
         k.domain_length();
}

double variance_count(const KernelSpec& k, double theta) {
  check_theta(k, theta, "variance_count");
  const double len = k.domain_length();
  if (theta <= 0.0 || theta >= len) return 0.0;

  if (k.family == KernelFamily::Unitary) {
    // |K(x, y)|^2 = S_N(x - y)^2 depends only on z = x - y mod 2pi. The set
    // of (x, y) in D x D^c with that difference has length
    // w(z) = min(z, 2pi - z, theta, 2pi - theta).
    const int n = k.n;
    const double a = std::min(theta, kTwoPi - theta);
    const double scale = 1.0 / (kTwoPi * kTwoPi);
    const QuadratureOptions opts{.abs_tol = 1e-9 / (3.0 * scale), .rel_tol = 1e-12};
    auto f2 = [n](double z) {
      const double s = s_n(n, z);
      return s * s;
    };
    const double left = integrate_adaptive([&](double z) { return z * f2(z); }, 0.0, a, opts).value;
    const double mid = integrate_adaptive([&](double z) { return a * f2(z); }, a, kTwoPi - a, opts).value;
    const double right =
        integrate_adaptive([&](double z) { return (kTwoPi - z) * f2(z); }, kTwoPi - a, kTwoPi, opts).value;
    return scale * (left + mid + right);
  }

  const KernelSpec dirichlet{k.family, KernelVariant::DirichletForm, k.n};
  const double scale = 1.0 / (len * len);
  const QuadratureOptions inner_opts{.abs_tol = 1e-11 / scale, .rel_tol = 1e-11};
  const QuadratureOptions outer_opts{.abs_tol = 1e-8 / scale, .rel_tol = 1e-11};
  const std::function<double(double)> outer = [&](double x) {
    const std::function<double(double)> inner = [&](double y) {
      const double kv = kernel_value(dirichlet, x, y).real();
      return kv * kv;
    };
    return integrate_adaptive(inner, theta, len, inner_opts).value;
  };
  return scale * integrate_adaptive(outer, 0.0, theta, outer_opts).value;
}

PowerMoments power_count_moments(int n, int m, double theta) {
  if (m < 1 || m > n) throw std::invalid_argument("power_count_moments: requires 1 <= m <= N");
  if (!(theta >= 0.0 && theta <= kTwoPi)) {
    throw std::out_of_range("power_count_moments: theta must lie in [0, 2pi]");
  }
  PowerMoments out;
  out.mean = n * theta / kTwoPi;
  std::map<int, double> by_size;
  for (int size : rains_block_sizes(n, m)) {
    auto it = by_size.find(size);
    if (it == by_size.end()) {
      it = by_size.emplace(size, variance_count(make_kernel(KernelFamily::Unitary, size), theta)).first;
    }
    out.variance += it->second;
  }
  out.variance_bound = m * (std::log(static_cast<double>(n) / m) + 1.0);
  return out;
}

BernoulliProfile bernoulli_profile_power(int n, int m, double theta) {
  BernoulliProfile out;
  out.kernel = make_kernel(KernelFamily::Unitary, n);
  out.theta = theta;
  for (int size : rains_block_sizes(n, m)) {
    const BernoulliProfile block = restriction_eigenvalues(make_kernel(KernelFamily::Unitary, size), theta);
    out.lambdas.insert(out.lambdas.end(), block.lambdas.begin(), block.lambdas.end());
    out.max_clamp = std::max(out.max_clamp, block.max_clamp);
  }
  return out;
}

}  // namespace smlab

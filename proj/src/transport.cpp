#include "smlab/transport.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "smlab/network_simplex.hpp"

namespace smlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kWeightTol = 1e-12;
constexpr double kCostResolution = 1e12;  // integer cost units per unit of cost
constexpr std::int64_t kGenericMassDenominator = std::int64_t{1} << 34;
constexpr int kShiftCandidates = 512;
constexpr int kRefinedMinima = 4;
constexpr int kGoldenIterations = 60;

double power_of(double base, double p) {
  if (p == 1.0) return base;
  if (p == 2.0) return base * base;
  return std::pow(base, p);
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("transport: p must be >= 1");
}

// Integer masses over a common denominator. Equal-weight measures (the
// spectral and discretised-uniform cases) are represented exactly; anything
// else is rounded onto a 2^-34 lattice with largest-remainder correction.
std::vector<std::int64_t> integer_masses(const CircularMeasure& mu, std::int64_t denom) {
  const std::size_t n = mu.size();
  std::vector<std::int64_t> out(n);
  std::vector<std::pair<double, std::size_t>> remainders(n);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = mu.weights[i] * static_cast<double>(denom);
    out[i] = static_cast<std::int64_t>(std::floor(scaled));
    remainders[i] = {scaled - static_cast<double>(out[i]), i};
    total += out[i];
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& l, const auto& r) { return l.first > r.first || (l.first == r.first && l.second < r.second); });
  for (std::size_t k = 0; total < denom && k < n; ++k, ++total) ++out[remainders[k].second];
  return out;
}

bool exactly_representable(const CircularMeasure& mu, std::int64_t denom) {
  for (double w : mu.weights) {
    const double scaled = w * static_cast<double>(denom);
    if (std::abs(scaled - std::round(scaled)) > 1e-6) return false;
  }
  return true;
}

double pair_cost(double x, double y, double p, CostModel model) {
  return model == CostModel::Chord ? chord_cost(x, y, p) : geodesic_cost(x, y, p);
}

// Integral over u in [u1, u2] of |2 sin(u/2)|^p du.
double arc_cost_integral(double u1, double u2, double p) {
  if (p == 2.0) {
    auto g = [](double u) { return 2.0 * u - 2.0 * std::sin(u); };
    return g(u2) - g(u1);
  }
  if (p == 1.0) {
    auto g = [](double u) {
      const double k = std::floor(u / kTwoPi);
      const double r = u - k * kTwoPi;
      return 8.0 * k + 4.0 - 4.0 * std::cos(0.5 * r);
    };
    return g(u2) - g(u1);
  }
  // Gauss-Legendre on pieces split at the kinks u = 2 pi k.
  static constexpr std::array<double, 10> kNodes = {
      0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
      0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
      0.9639719272779138, 0.9931285991850949};
  static constexpr std::array<double, 10> kWeights = {
      0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
      0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
      0.0406014298003869, 0.0176140071391521};
  auto piece = [p](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double u = mid + sign * half * kNodes[i];
        sum += kWeights[i] * std::pow(2.0 * std::abs(std::sin(0.5 * u)), p);
      }
    }
    return sum * half;
  };
  double total = 0.0;
  double a = u1;
  while (a < u2) {
    const double next_kink = (std::floor(a / kTwoPi) + 1.0) * kTwoPi;
    const double b = std::min(u2, next_kink);
    // Four sub-panels per piece keep the quadrature well below 1e-10 on an arc.
    const double step = (b - a) / 4.0;
    for (int s = 0; s < 4; ++s) total += piece(a + s * step, a + (s + 1) * step);
    a = b;
  }
  return total;
}

std::vector<double> sorted_atoms(const CircularMeasure& a) {
  std::vector<double> atoms = a.atoms;
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

}  // namespace

bool CircularMeasure::has_equal_weights(double tol) const {
  if (weights.empty()) return false;
  const double w = 1.0 / static_cast<double>(weights.size());
  return std::all_of(weights.begin(), weights.end(), [&](double x) { return std::abs(x - w) <= tol; });
}

CircularMeasure CircularMeasure::equal_weights(std::vector<double> atoms) {
  CircularMeasure mu;
  const double w = atoms.empty() ? 0.0 : 1.0 / static_cast<double>(atoms.size());
  mu.weights.assign(atoms.size(), w);
  mu.atoms = std::move(atoms);
  return mu;
}

CircularMeasure CircularMeasure::from_angles(const AngleSet& a) { return equal_weights(a.angles); }

void validate(const CircularMeasure& mu) {
  if (mu.atoms.empty() || mu.atoms.size() != mu.weights.size()) {
    throw std::invalid_argument("CircularMeasure: atoms and weights must be nonempty and aligned");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu.atoms[i] >= 0.0 && mu.atoms[i] < kTwoPi)) {
      throw std::invalid_argument("CircularMeasure: atom outside [0, 2pi)");
    }
    if (!(mu.weights[i] >= 0.0)) throw std::invalid_argument("CircularMeasure: negative weight");
    total += mu.weights[i];
  }
  if (!(std::abs(total - 1.0) <= kWeightTol)) {
    throw std::invalid_argument("CircularMeasure: weights sum to " + std::to_string(total) +
                                ", not 1");
  }
}

double chord_cost(double x, double y, double p) {
  check_p(p);
  return power_of(2.0 * std::abs(std::sin(0.5 * (x - y))), p);
}

double geodesic_cost(double x, double y, double p) {
  check_p(p);
  double d = std::fmod(std::abs(x - y), kTwoPi);
  d = std::min(d, kTwoPi - d);
  return power_of(d, p);
}

TransportResult wasserstein_exact(const CircularMeasure& a, const CircularMeasure& b, double p,
                                  CostModel cost_model) {
  check_p(p);
  validate(a);
  validate(b);
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  if (na > kMaxAtomsPerMeasure || nb > kMaxAtomsPerMeasure || na * nb > kMaxTransportArcs) {
    throw std::invalid_argument("wasserstein_exact: problem exceeds the desk-scale size limit");
  }

  std::int64_t denom = std::lcm(static_cast<std::int64_t>(na), static_cast<std::int64_t>(nb));
  if (!exactly_representable(a, denom) || !exactly_representable(b, denom)) {
    denom = kGenericMassDenominator;
  }
  const std::vector<std::int64_t> supply = integer_masses(a, denom);
  const std::vector<std::int64_t> demand = integer_masses(b, denom);

  std::vector<double> cost(na * nb);
  double max_cost = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double c = pair_cost(a.atoms[i], b.atoms[j], p, cost_model);
      cost[i * nb + j] = c;
      max_cost = std::max(max_cost, c);
    }
  }
  // Integer potentials stay below (max cost + 1) * node count.
  const double nodes = static_cast<double>(na + nb + 1);
  const double scale = std::min(kCostResolution, 0x1.0p60 / ((max_cost + 1.0) * nodes));

  NetworkSimplex solver(static_cast<int>(na + nb));
  solver.reserve_arcs(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    solver.set_supply(static_cast<int>(i), supply[i]);
    for (std::size_t j = 0; j < nb; ++j) {
      solver.add_arc(static_cast<int>(i), static_cast<int>(na + j),
                     static_cast<std::int64_t>(std::llround(cost[i * nb + j] * scale)));
    }
  }
  for (std::size_t j = 0; j < nb; ++j) solver.set_supply(static_cast<int>(na + j), -demand[j]);
  if (solver.run() != NetworkSimplex::Status::Optimal) {
    throw std::runtime_error("wasserstein_exact: transportation problem infeasible");
  }

  TransportResult r;
  r.p = p;
  r.cost_model = cost_model;
  r.method = TransportMethod::ExactFlow;
  std::vector<PlanEntry> plan;
  double total = 0.0;
  for (int e = 0; e < static_cast<int>(na * nb); ++e) {
    const std::int64_t f = solver.flow(e);
    if (f == 0) continue;
    const double mass = static_cast<double>(f) / static_cast<double>(denom);
    const int i = e / static_cast<int>(nb);
    const int j = e % static_cast<int>(nb);
    plan.push_back({i, j, mass});
    total += mass * cost[static_cast<std::size_t>(e)];
  }
  r.plan = std::move(plan);
  // The plan is optimal for costs rounded to 1/scale, so its true cost
  // exceeds the optimum by at most 1/scale.
  r.value = std::pow(total, 1.0 / p);
  r.upper = r.value;
  r.lower = std::pow(std::max(0.0, total - 1.0 / scale), 1.0 / p);
  return r;
}

CircularMeasure uniform_discretization(int k) {
  if (k < 1) throw std::invalid_argument("uniform_discretization: K must be >= 1");
  std::vector<double> atoms(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) atoms[static_cast<std::size_t>(i)] = kTwoPi * (i + 0.5) / k;
  return CircularMeasure::equal_weights(std::move(atoms));
}

CircularMeasure grid_measure(int n) {
  if (n < 1) throw std::invalid_argument("grid_measure: N must be >= 1");
  std::vector<double> atoms(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) atoms[static_cast<std::size_t>(j - 1)] = wrap_angle(kTwoPi * j / n);
  return CircularMeasure::equal_weights(std::move(atoms));
}

TransportResult wasserstein_empirical_uniform(const CircularMeasure& a, double p, int k) {
  validate(a);
  const int n = static_cast<int>(a.size());
  if (k < 1 || k % n != 0 || k > static_cast<int>(kMaxAtomsPerMeasure)) {
    throw std::invalid_argument("wasserstein_empirical_uniform: K must be a multiple of the atom count, <= 4096");
  }
  TransportResult r = wasserstein_exact(a, uniform_discretization(k), p, CostModel::Chord);
  const double slack = kTwoPi / k;
  r.lower = std::max(0.0, r.lower - slack);
  r.upper = r.upper + slack;
  return r;
}

TransportResult monotone_shift_estimate(const CircularMeasure& a, double p) {
  check_p(p);
  validate(a);
  if (!a.has_equal_weights()) throw std::invalid_argument("monotone_shift_estimate: weights must be equal");
  const std::vector<double> atoms = sorted_atoms(a);
  const int n = static_cast<int>(atoms.size());
  const double arc = kTwoPi / n;

  // Mean cost when atom j receives the arc [s + j*arc, s + (j+1)*arc).
  auto cost = [&](double s) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double start = s + j * arc - atoms[static_cast<std::size_t>(j)];
      total += arc_cost_integral(start, start + arc, p);
    }
    return total / kTwoPi;
  };

  std::vector<double> grid(kShiftCandidates);
  const double h = kTwoPi / kShiftCandidates;
  for (int i = 0; i < kShiftCandidates; ++i) grid[static_cast<std::size_t>(i)] = cost(i * h);
  double best = *std::min_element(grid.begin(), grid.end());

  std::vector<int> minima;
  for (int i = 0; i < kShiftCandidates; ++i) {
    const double here = grid[static_cast<std::size_t>(i)];
    const double left = grid[static_cast<std::size_t>((i + kShiftCandidates - 1) % kShiftCandidates)];
    const double right = grid[static_cast<std::size_t>((i + 1) % kShiftCandidates)];
    if (here <= left && here <= right) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(),
            [&](int l, int r) { return grid[static_cast<std::size_t>(l)] < grid[static_cast<std::size_t>(r)]; });
  if (minima.size() > kRefinedMinima) minima.resize(kRefinedMinima);

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i : minima) {
    double lo = (i - 1) * h;
    double hi = (i + 1) * h;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = cost(x1);
    double f2 = cost(x2);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = cost(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = cost(x2);
      }
      best = std::min({best, f1, f2});
    }
  }

  TransportResult r;
  r.p = p;
  r.cost_model = CostModel::Chord;
  r.method = TransportMethod::MonotoneShift;
  r.value = std::pow(std::max(best, 0.0), 1.0 / p);
  r.lower = 0.0;
  r.upper = r.value;
  return r;
}

TransportResult monotone_shift_estimate(const CircularMeasure& a, double p, int k) {
  check_p(p);
  validate(a);
  if (!a.has_equal_weights()) throw std::invalid_argument("monotone_shift_estimate: weights must be equal");
  const int n = static_cast<int>(a.size());
  if (k < 1 || k % n != 0) {
    throw std::invalid_argument("monotone_shift_estimate: K must be a multiple of the atom count");
  }
  const std::vector<double> atoms = sorted_atoms(a);
  const CircularMeasure target = uniform_discretization(k);
  const int q = k / n;

  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < k; ++r) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double theta = atoms[static_cast<std::size_t>(j)];
      for (int i = 0; i < q; ++i) {
        total += chord_cost(theta, target.atoms[static_cast<std::size_t>((r + j * q + i) % k)], p);
      }
    }
    best = std::min(best, total / k);
  }

  TransportResult res;
  res.p = p;
  res.cost_model = CostModel::Chord;
  res.method = TransportMethod::MonotoneShift;
  res.value = std::pow(best, 1.0 / p);
  res.lower = 0.0;
  res.upper = res.value;
  return res;
}

int default_discretization(int atom_count) {
  if (atom_count < 1 || atom_count > static_cast<int>(kMaxAtomsPerMeasure)) {
    throw std::invalid_argument("default_discretization: atom count out of range");
  }
  const int cap = std::min(32 * atom_count, static_cast<int>(kMaxAtomsPerMeasure));
  return cap / atom_count * atom_count;
}

TransportResult spectral_measure_distance(const MatrixSample& m, int power, double p,
                                          TransportMethod method, int k) {
  const CircularMeasure mu = CircularMeasure::from_angles(power_angles(eigenangles(m), power));
  if (method == TransportMethod::MonotoneShift) return monotone_shift_estimate(mu, p);
  const int disc = k > 0 ? k : default_discretization(static_cast<int>(mu.size()));
  return wasserstein_empirical_uniform(mu, p, disc);
}

}  // namespace smlab

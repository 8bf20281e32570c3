#include "smlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "smlab/bounds.hpp"
#include "smlab/dpp.hpp"
#include "smlab/harness.hpp"
#include "smlab/spectral.hpp"
#include "smlab/stats.hpp"
#include "smlab/transport.hpp"

namespace smlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr std::uint64_t kSeedBase = 0x5eed0000ULL;

std::uint64_t seed_for(int criterion, int variant = 0) {
  return kSeedBase + static_cast<std::uint64_t>(criterion) * 1000 + static_cast<std::uint64_t>(variant);
}

std::vector<double> grid(double top, int points) {
  std::vector<double> out;
  for (int i = 1; i <= points; ++i) out.push_back(top * i / points);
  return out;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  Outcome() { detail << std::setprecision(4); }
  void require(bool ok) { pass = pass && ok; }
  template <class T>
  Outcome& operator<<(const T& x) {
    detail << x;
    return *this;
  }
};

void note_experiment(Outcome& o, const ExperimentResult& r) {
  o.require(r.pass());
  double min_p = 1.0;
  for (const auto& t : r.tests) min_p = std::min(min_p, t.p_value);
  int failed = 0;
  for (const auto& c : r.comparisons) failed += !c.pass;
  for (const auto& t : r.tests) failed += !t.pass;
  o << describe(r.config.group) << " m=" << r.config.m << ": ";
  if (!r.tests.empty()) o << "min p=" << min_p << " ";
  o << "failed=" << failed << "; ";
}

// -- criteria ----------------------------------------------------------------

void mean_identity(Outcome& o, bool) {
  double worst = 0.0;
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    const KernelSpec k = make_kernel(KernelFamily::Unitary, n);
    for (double theta : grid(kTwoPi, 32)) {
      worst = std::max(worst, std::abs(restriction_eigenvalues(k, theta).sum() - n * theta / kTwoPi));
    }
  }
  o.require(worst <= 1e-9);
  o << "max |sum lambda - N theta/2pi| = " << worst << " (tol 1e-9)";
}

void near_linearity(Outcome& o, bool) {
  double worst = 0.0;
  for (KernelFamily f : {KernelFamily::SOEven, KernelFamily::SOOdd, KernelFamily::SONegOdd, KernelFamily::SpLike}) {
    for (int n = 1; n <= 64; ++n) {
      const KernelSpec k = make_kernel(f, n);
      for (double theta : grid(kPi, 32)) worst = std::max(worst, std::abs(mean_count(k, theta) - n * theta / kPi));
    }
  }
  o.require(worst < 1.0);
  o << "max |E N - N theta/pi| = " << worst << " over SO(2N), SO(2N+1), SO-(2N+1), SO-(2N+2), Sp(N), N<=64";
}

void variance_bound(Outcome& o, bool fast) {
  double worst_ratio = 0.0;
  double worst_identity = 0.0;
  const int top = fast ? 128 : 512;
  for (int n = 2; n <= top; n *= 2) {
    const KernelSpec k = make_kernel(KernelFamily::Unitary, n);
    const double bound = std::log(static_cast<double>(n)) + 1.0;
    for (double theta : grid(kTwoPi, 32)) {
      const double v = variance_count(k, theta);
      worst_ratio = std::max(worst_ratio, v / bound);
      worst_identity = std::max(worst_identity, std::abs(restriction_eigenvalues(k, theta).variance() - v));
    }
  }
  o.require(worst_ratio <= 1.0 && worst_identity <= 1e-6);
  o << "max Var/(log N + 1) = " << worst_ratio << ", max |sum lambda(1-lambda) - Var| = " << worst_identity
    << " (N<=" << top << ")";
}

void bernoulli_representation(Outcome& o, bool fast) {
  using G = GroupFamily;
  const std::vector<GroupSpec> groups = {
      make_group(G::Unitary, 8),        make_group(G::SpecialOrthogonal, 8), make_group(G::SpecialOrthogonal, 9),
      make_group(G::NegOrthogonal, 9),  make_group(G::NegOrthogonal, 10),    make_group(G::Symplectic, 4),
      make_group(G::Orthogonal, 7),
  };
  int variant = 0;
  for (const GroupSpec& g : groups) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::CountDistribution;
    c.group = g;
    c.replicas = fast ? 2000 : 10000;
    c.theta_grid = {kPi / 4, kPi / 2, kPi};
    c.master_seed = seed_for(4, variant++);
    note_experiment(o, run_experiment(c));
  }
}

void rains(Outcome& o, bool fast) {
  int variant = 0;
  for (auto [n, m] : std::vector<std::pair<int, int>>{{6, 2}, {8, 2}, {8, 4}, {9, 3}}) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::RainsEquivalence;
    c.group = make_group(GroupFamily::Unitary, n);
    c.m = m;
    c.replicas = fast ? 2000 : 10000;
    c.theta_grid = {kPi / 2, kPi};
    c.master_seed = seed_for(5, variant++);
    note_experiment(o, run_experiment(c));
  }
}

void iid_extreme(Outcome& o, bool) {
  constexpr int n = 8;
  RngStream rng(seed_for(6), 0);
  const GroupSpec u = make_group(GroupFamily::Unitary, n);
  std::vector<double> pooled;
  std::vector<int> counts;
  for (int r = 0; r < 500; ++r) {
    const AngleSet a = power_angles(eigenangles(sample_haar(u, rng)), n);
    pooled.insert(pooled.end(), a.angles.begin(), a.angles.end());
    counts.push_back(counting_function(a, kPi));
  }
  const TestResult ks = uniformity_test(pooled);
  const TestResult gof = chi_square_gof(counts, binomial_pmf(n, 0.5));
  o.require(ks.p_value > 1e-3 && gof.p_value > 1e-3);
  o << "KS p=" << ks.p_value << " (4000 angles), Binomial(8,1/2) chi-square p=" << gof.p_value;
}

void power_moments(Outcome& o, bool fast) {
  const std::vector<double> thetas = grid(kTwoPi, 32);
  std::map<std::pair<int, std::size_t>, double> block_variance;
  for (int size = 1; size <= 64; ++size) {
    const KernelSpec k = make_kernel(KernelFamily::Unitary, size);
    for (std::size_t i = 0; i < thetas.size(); ++i) block_variance[{size, i}] = variance_count(k, thetas[i]);
  }
  double worst = 0.0;
  for (int n = 1; n <= 64; ++n) {
    for (int m = 1; m <= n; ++m) {
      const double bound = power_variance_bound(n, m);
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        double v = 0.0;
        for (int size : rains_block_sizes(n, m)) v += block_variance.at({size, i});
        worst = std::max(worst, v / bound);
      }
    }
  }
  o.require(worst <= 1.0);
  o << "max block variance / m(log(N/m)+1) = " << worst << "; ";

  ExperimentConfig c;
  c.experiment = ExperimentKind::VarianceScan;
  c.group = make_group(GroupFamily::Unitary, 32);
  c.m = 4;
  c.replicas = fast ? 2000 : 10000;
  c.theta_grid = {kPi / 2, kPi};
  c.master_seed = seed_for(7);
  const ExperimentResult r = run_experiment(c);
  note_experiment(o, r);
  for (const auto& cmp : r.comparisons) {
    if (cmp.label.rfind("|mc", 0) == 0) o << "|dVar|=" << cmp.empirical << " vs 3se=" << cmp.bound << "; ";
  }
}

void mean_wasserstein(Outcome& o, bool fast) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  int variant = 0;
  for (auto [n, m] : std::vector<std::pair<int, int>>{{16, 1}, {32, 1}, {32, 4}, {64, 8}}) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::MeanDistance;
    c.group = make_group(GroupFamily::Unitary, n);
    c.m = m;
    c.p = 1.0;
    c.replicas = fast ? 200 : 2000;
    c.transport_method = TransportMethod::ExactFlow;
    c.discretization = 32 * n;
    c.master_seed = seed_for(8, variant++);
    const ExperimentResult r = run_experiment(c);
    const double mean = r.summary.front().mean;
    const double ratio = mean / (std::sqrt(m * (std::log(static_cast<double>(n) / m) + 1.0)) / n);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    o.require(r.pass());
    o << "(" << n << "," << m << ") mean=" << mean << " bound=" << r.comparisons.front().bound << " ratio=" << ratio
      << "; ";
  }
  o.require(hi / lo <= 3.0);
  o << "ratio band " << hi / lo << " (<= 3)";
}

void grid_bound(Outcome& o, bool) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int n : {2, 4, 8, 16, 64}) {
    for (double p : {1.0, 2.0}) {
      const int k = 64 * n;
      const double value = wasserstein_empirical_uniform(grid_measure(n), p, k).value;
      worst = std::max(worst, value - (kPi / n + kTwoPi / k));
    }
  }
  o.require(worst <= 0.0);
  o << "max W_p(nu_N, nu) - (pi/N + 2pi/K) = " << worst;
}

void lipschitz(Outcome& o, bool) {
  double worst = -std::numeric_limits<double>::infinity();
  bool equality = true;
  int variant = 0;
  for (int n : {2, 4, 8, 16, 32}) {
    for (double p : {1.0, 2.0, 4.0}) {
      ExperimentConfig c;
      c.experiment = ExperimentKind::LipschitzCheck;
      c.group = make_group(GroupFamily::Unitary, n);
      c.p = p;
      c.replicas = 40;
      c.master_seed = seed_for(10, variant);
      const ExperimentResult r = run_experiment(c);
      o.require(r.pass());
      for (const auto& cmp : r.comparisons) {
        if (cmp.label.rfind("max", 0) == 0) worst = std::max(worst, cmp.empirical);
        else equality = equality && cmp.pass;
      }
    }
    ++variant;
  }
  o << "200 pairs x p in {1,2,4}: max(W_p - L ||A-B||_HS) = " << worst << "; equality case "
    << (equality ? "exact" : "FAILED");
}

void concentration_tail(Outcome& o, bool fast) {
  const int replicas = fast ? 1000 : 10000;
  int variant = 0;
  for (int m : {1, 4}) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::TailProbability;
    c.group = make_group(GroupFamily::Unitary, 32);
    c.m = m;
    c.p = 1.0;
    c.replicas = replicas;
    c.discretization = 32 * 32;
    // Largest t at which the bound still resolves 10 events in R replicas.
    const double t_max = std::sqrt(24.0 * m * std::log(replicas / 10.0)) / 32.0;
    c.t_grid = grid(t_max, 16);
    c.master_seed = seed_for(11, variant++);
    const ExperimentResult r = run_experiment(c);
    note_experiment(o, r);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& cmp : r.comparisons) {
      if (!cmp.vacuous) margin = std::min(margin, cmp.bound - cmp.empirical);
    }
    o << "min(bound - tail)=" << margin << "; ";
  }
}

void eigenangle_concentration(Outcome& o, bool fast) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::EigenangleConcentration;
  c.group = make_group(GroupFamily::Unitary, 32);
  c.m = 1;
  c.replicas = fast ? 2000 : 10000;
  c.indices = {1, 16, 32};
  c.t_grid = grid(8.0, 16);
  c.master_seed = seed_for(12);
  const ExperimentResult r = run_experiment(c);
  note_experiment(o, r);
  double worst = 0.0;
  for (const auto& cmp : r.comparisons) {
    if (!cmp.vacuous) worst = std::max(worst, cmp.empirical / cmp.bound);
  }
  o << "max empirical/bound = " << worst;
}

void coupling(Outcome& o, bool fast) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::CouplingCheck;
  c.group = make_group(GroupFamily::Unitary, 6);
  c.replicas = fast ? 2000 : 10000;
  c.theta_grid = {kPi / 2, kPi, 3 * kPi / 2};
  c.master_seed = seed_for(13);
  const ExperimentResult r = run_experiment(c);
  note_experiment(o, r);
  for (const auto& cmp : r.comparisons) o << "max round-trip error " << cmp.empirical;
}

void transport_referee(Outcome& o, bool fast) {
  RngStream rng(seed_for(14), 0);
  const int instances = fast ? 30 : 100;
  double worst_gap = std::numeric_limits<double>::infinity();
  double worst_bracket = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + static_cast<int>(rng.below(16));
    const int k = n * (1 + static_cast<int>(rng.below(16)));
    const double p = i % 2 == 0 ? 1.0 : 2.0;
    std::vector<double> atoms(static_cast<std::size_t>(n));
    for (double& a : atoms) a = rng.uniform(0.0, kTwoPi);
    const CircularMeasure mu = CircularMeasure::equal_weights(atoms);
    const TransportResult exact = wasserstein_exact(mu, uniform_discretization(k), p);
    const double shift = monotone_shift_estimate(mu, p, k).value;
    worst_gap = std::min(worst_gap, shift - exact.value);
    // Continuous-target estimate against the widened bracket of the discretised value.
    const TransportResult semi = wasserstein_empirical_uniform(mu, p, k);
    worst_bracket = std::min(worst_bracket, monotone_shift_estimate(mu, p).value - semi.lower);
  }
  o.require(worst_gap >= -1e-9 && worst_bracket >= -1e-9);
  o << instances << " instances: min(shift - exact) = " << worst_gap
    << ", min(continuous shift - bracket lower) = " << worst_bracket << "; ";

  const CircularMeasure point = CircularMeasure::equal_weights({0.0});
  const double limit = 4.0 / kPi;
  std::vector<double> errors;
  for (int k : {256, 512, 1024}) errors.push_back(std::abs(wasserstein_exact(point, uniform_discretization(k), 1.0).value - limit));
  const double order = std::log2(errors[1] / errors[2]);
  const double order_coarse = std::log2(errors[0] / errors[1]);
  o.require(errors[2] <= 2e-3 && order >= 0.9 && order_coarse >= 0.9);
  o << "single atom |W - 4/pi| at K=1024: " << errors[2] << ", observed order " << order_coarse << ", " << order;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  ///< 0: no runtime requirement
  std::function<void(Outcome&, bool)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> table = {
      {1, "mean identity", 10, mean_identity},
      {2, "near-linearity of means", 30, near_linearity},
      {3, "variance bound", 120, variance_bound},
      {4, "bernoulli representation", 180, bernoulli_representation},
      {5, "rains decomposition", 180, rains},
      {6, "i.i.d. extreme", 0, iid_extreme},
      {7, "power moments", 0, power_moments},
      {8, "mean wasserstein bound", 600, mean_wasserstein},
      {9, "grid bound", 0, grid_bound},
      {10, "lipschitz estimate", 0, lipschitz},
      {11, "concentration tail", 600, concentration_tail},
      {12, "eigenangle concentration", 0, eigenangle_concentration},
      {13, "phase coupling", 0, coupling},
      {14, "transport referee", 0, transport_referee},
  };
  return table;
}

const std::map<std::string, std::vector<int>, std::less<>>& suites() {
  static const std::map<std::string, std::vector<int>, std::less<>> table = {
      {"means", {1, 2}},         {"variance", {3, 7}},           {"bernoulli", {4}},
      {"rains", {5, 6}},         {"transport", {8, 9, 14}},      {"concentration", {11, 12}},
      {"coupling", {13}},        {"lipschitz", {10}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14}},
  };
  return table;
}

}  // namespace

CriterionResult run_criterion(int id, bool fast) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id must lie in 1..14");
  const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.name = c.name;
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(o, fast);
  } catch (const std::exception& e) {
    o.require(false);
    o << "error: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.budget_seconds > 0 && r.seconds > c.budget_seconds) {
    o.require(false);
    o << "; runtime " << r.seconds << " s exceeds " << c.budget_seconds << " s";
  }
  r.pass = o.pass;
  r.detail = o.detail.str();
  return r;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, ids] : suites()) out.push_back(name);
  return out;
}

std::vector<int> suite_criteria(std::string_view suite) {
  const auto it = suites().find(suite);
  if (it == suites().end()) throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  return it->second;
}

std::vector<CriterionResult> run_suite(std::string_view suite, bool fast) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(suite)) out.push_back(run_criterion(id, fast));
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left << std::setw(26) << r.name
     << std::right << " (" << std::fixed << std::setprecision(1) << r.seconds << " s)  " << r.detail;
  return os.str();
}

}  // namespace smlab

#include "smlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "smlab/bounds.hpp"
#include "smlab/dpp.hpp"
#include "smlab/spectral.hpp"
#include "smlab/stats.hpp"

#ifndef SMLAB_VERSION
#define SMLAB_VERSION "0.0.0"
#endif

namespace smlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResolvableEvents = 10.0;
constexpr double kRoundTripTol = 1e-10;
constexpr double kLipschitzSlack = 1e-8;
constexpr double kEqualityTol = 1e-12;

// Per-purpose child keys of a replica's stream.
enum Purpose : std::uint64_t { kPrimary = 1, kSecondary = 2, kPhase = 3 };

constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
    {ExperimentKind::MeanDistance, "mean_distance"},
    {ExperimentKind::TailProbability, "tail_probability"},
    {ExperimentKind::CountDistribution, "count_distribution"},
    {ExperimentKind::RainsEquivalence, "rains_equivalence"},
    {ExperimentKind::EigenangleConcentration, "eigenangle_concentration"},
    {ExperimentKind::VarianceScan, "variance_scan"},
    {ExperimentKind::CouplingCheck, "coupling_check"},
    {ExperimentKind::LipschitzCheck, "lipschitz_check"},
};

const std::map<ExperimentKind, std::vector<GroupFamily>>& support_table() {
  using G = GroupFamily;
  static const std::map<ExperimentKind, std::vector<GroupFamily>> table = {
      {ExperimentKind::MeanDistance,
       {G::Unitary, G::SpecialUnitary, G::Orthogonal, G::SpecialOrthogonal, G::NegOrthogonal, G::Symplectic}},
      {ExperimentKind::TailProbability, {G::Unitary, G::SpecialUnitary}},
      {ExperimentKind::CountDistribution,
       {G::Unitary, G::Orthogonal, G::SpecialOrthogonal, G::NegOrthogonal, G::Symplectic}},
      {ExperimentKind::RainsEquivalence, {G::Unitary}},
      {ExperimentKind::EigenangleConcentration, {G::Unitary, G::SpecialUnitary}},
      {ExperimentKind::VarianceScan, {G::Unitary}},
      {ExperimentKind::CouplingCheck, {G::Unitary}},
      {ExperimentKind::LipschitzCheck, {G::Unitary}},
  };
  return table;
}

std::string format_abscissa(const char* name, double x) {
  std::ostringstream os;
  os.precision(6);
  os << name << "=" << x;
  return os.str();
}

using ReplicaFn = std::function<std::vector<double>(std::uint64_t index, const RngStream& stream)>;

// Replica i always draws from RngStream(seed, i), and results land in slot i,
// so the output does not depend on the number of workers.
std::vector<ReplicaRecord> run_replicas(const ExperimentConfig& config, const ReplicaFn& fn) {
  const std::size_t count = static_cast<std::size_t>(config.replicas);
  std::vector<ReplicaRecord> records(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        const RngStream stream(config.master_seed, i);
        records[i].index = i;
        records[i].values = fn(i, stream);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const int workers = std::min<int>(thread_budget(), static_cast<int>(count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<double> column(const ExperimentResult& r, std::size_t field) {
  std::vector<double> out;
  out.reserve(r.records.size());
  for (const auto& rec : r.records) out.push_back(rec.values[field]);
  return out;
}

std::vector<int> int_column(const ExperimentResult& r, std::size_t field, int det_filter = 0,
                            std::size_t det_field = 0) {
  std::vector<int> out;
  for (const auto& rec : r.records) {
    if (det_filter != 0 && static_cast<int>(rec.values[det_field]) != det_filter) continue;
    out.push_back(static_cast<int>(rec.values[field]));
  }
  return out;
}

void add_summary(ExperimentResult& r, const std::string& name, const std::vector<double>& xs) {
  const MomentSummary s = summarize(xs);
  r.summary.push_back({name, s.mean, s.variance, s.count});
}

void add_comparison(ExperimentResult& r, std::string label, double abscissa, double empirical, double bound,
                    bool vacuous = false) {
  r.comparisons.push_back({std::move(label), abscissa, empirical, bound, vacuous, vacuous || empirical <= bound});
}

void add_test(ExperimentResult& r, std::string label, double abscissa, const TestResult& t) {
  r.tests.push_back({std::move(label), abscissa, t.statistic, t.p_value, r.config.alpha,
                     test_method_name(t.method), t.p_value > r.config.alpha});
}

double deviation_fraction(const std::vector<double>& xs, double threshold, bool strict) {
  std::size_t hits = 0;
  for (double x : xs) hits += strict ? (x > threshold) : (x >= threshold);
  return static_cast<double>(hits) / static_cast<double>(xs.size());
}

std::string theta_label(const std::string& stem, double theta) { return stem + " " + format_abscissa("theta", theta); }

AngleSet powered_haar_angles(const GroupSpec& group, int m, RngStream& rng) {
  return power_angles(eigenangles(sample_haar(group, rng)), m);
}

// ---------------------------------------------------------------------------

void run_distance(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const int size = c.group.matrix_size();
  const int k = c.transport_method == TransportMethod::ExactFlow
                    ? (c.discretization > 0 ? c.discretization : default_discretization(size))
                    : 0;
  r.record_fields = {"value", "lower", "upper", "det_sign"};
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    const MatrixSample s = sample_haar(c.group, rng);
    const AngleSet base = eigenangles(s);
    const CircularMeasure mu = CircularMeasure::from_angles(power_angles(base, c.m));
    const TransportResult t = c.transport_method == TransportMethod::ExactFlow
                                  ? wasserstein_empirical_uniform(mu, c.p, k)
                                  : monotone_shift_estimate(mu, c.p);
    return std::vector<double>{t.value, t.lower, t.upper, static_cast<double>(base.determinant_sign)};
  });
  const std::vector<double> values = column(r, 0);
  add_summary(r, "value", values);
  if (c.group.family == GroupFamily::Orthogonal) {
    for (int det : {1, -1}) {
      std::vector<double> coset;
      for (const auto& rec : r.records) {
        if (static_cast<int>(rec.values[3]) == det) coset.push_back(rec.values[0]);
      }
      add_summary(r, det > 0 ? "value[det=+1]" : "value[det=-1]", coset);
    }
  }
}

void run_mean_distance(ExperimentResult& r) {
  run_distance(r);
  const ExperimentConfig& c = r.config;
  const int size = c.group.matrix_size();
  if (c.group.is_unitary_type() && c.m <= size) {
    add_comparison(r, "mean <= mean_wp_bound", 0.0, r.summary.front().mean, mean_wp_bound(size, c.m, c.p));
  }
}

void run_tail_probability(ExperimentResult& r) {
  run_distance(r);
  const ExperimentConfig& c = r.config;
  const int size = c.group.matrix_size();
  const std::vector<double> values = column(r, 0);
  const double mean = r.summary.front().mean;
  for (double t : c.t_grid) {
    const double bound = tail_bound(size, c.m, c.p, t);
    add_comparison(r, format_abscissa("P[W >= mean + t] t", t), t, deviation_fraction(values, mean + t, false),
                   bound, bound < kResolvableEvents / c.replicas);
  }
}

void run_count_distribution(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const bool unitary = c.group.family == GroupFamily::Unitary;
  const bool split = c.group.family == GroupFamily::Orthogonal;
  const std::size_t nt = c.theta_grid.size();

  // Bernoulli profiles per coset (det sign) and theta.
  std::map<int, std::vector<BernoulliProfile>> profiles;
  for (int det : split ? std::vector<int>{1, -1} : std::vector<int>{1}) {
    const KernelSpec kernel = kernel_for_group(c.group, det);
    for (double theta : c.theta_grid) profiles[det].push_back(restriction_eigenvalues(kernel, theta));
  }

  r.record_fields = {"det_sign"};
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("direct", theta));
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("bernoulli", theta));
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    RngStream bern = stream.substream(kSecondary);
    const AngleSet a = eigenangles(sample_haar(c.group, rng));
    const int det = split ? a.determinant_sign : 1;
    std::vector<double> out{static_cast<double>(a.determinant_sign)};
    for (double theta : c.theta_grid) {
      out.push_back(unitary ? counting_function(a, theta) : nontrivial_counting_function(a, theta));
    }
    for (std::size_t i = 0; i < nt; ++i) out.push_back(sample_count_bernoulli(profiles.at(det)[i], bern));
    return out;
  });

  for (int det : split ? std::vector<int>{1, -1} : std::vector<int>{0}) {
    const std::string coset = det == 0 ? "" : (det > 0 ? " det=+1" : " det=-1");
    for (std::size_t i = 0; i < nt; ++i) {
      const std::vector<int> direct = int_column(r, 1 + i, det, 0);
      const std::vector<int> bernoulli = int_column(r, 1 + nt + i, det, 0);
      const double theta = c.theta_grid[i];
      std::vector<double> as_double(direct.begin(), direct.end());
      add_summary(r, theta_label("direct" + coset, theta), as_double);
      as_double.assign(bernoulli.begin(), bernoulli.end());
      add_summary(r, theta_label("bernoulli" + coset, theta), as_double);
      if (direct.empty()) continue;
      add_test(r, theta_label("direct vs bernoulli" + coset, theta), theta,
               two_sample_count_test(direct, bernoulli));
    }
  }
}

void run_rains_equivalence(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const std::size_t nt = c.theta_grid.size();
  const int n = c.group.rank;
  r.record_fields.clear();
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("direct", theta));
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("blocks", theta));
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    RngStream blocks_rng = stream.substream(kSecondary);
    const AngleSet direct = powered_haar_angles(c.group, c.m, rng);
    const AngleSet blocks = sample_power_spectrum_rains(n, c.m, blocks_rng);
    std::vector<double> out;
    for (double theta : c.theta_grid) out.push_back(counting_function(direct, theta));
    for (double theta : c.theta_grid) out.push_back(counting_function(blocks, theta));
    return out;
  });
  for (std::size_t i = 0; i < nt; ++i) {
    const double theta = c.theta_grid[i];
    add_summary(r, theta_label("direct", theta), column(r, i));
    add_summary(r, theta_label("blocks", theta), column(r, nt + i));
    add_test(r, theta_label("direct vs blocks", theta), theta,
             two_sample_count_test(int_column(r, i), int_column(r, nt + i)));
  }
}

std::vector<int> concentration_indices(const ExperimentConfig& c) {
  const int n = c.group.matrix_size();
  if (!c.indices.empty()) return c.indices;
  std::vector<int> idx{1, std::max(1, n / 2), n};
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

void run_eigenangle_concentration(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const int n = c.group.matrix_size();
  const std::vector<int> idx = concentration_indices(c);
  r.record_fields.clear();
  for (int j : idx) r.record_fields.push_back("deviation j=" + std::to_string(j));
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    const AngleSet a = powered_haar_angles(c.group, c.m, rng);
    std::vector<double> out;
    for (int j : idx) out.push_back(std::abs(a.angles[static_cast<std::size_t>(j - 1)] - kTwoPi * j / n));
    return out;
  });
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const std::vector<double> dev = column(r, i);
    const std::string stem = "P[|theta_j - 2 pi j/N| > 4 pi u/N] j=" + std::to_string(idx[i]);
    add_summary(r, "deviation j=" + std::to_string(idx[i]), dev);
    for (double u : c.t_grid) {
      const double bound = eigenangle_tail(n, c.m, u);
      add_comparison(r, stem + " " + format_abscissa("u", u), u,
                     deviation_fraction(dev, 4.0 * std::numbers::pi * u / n, true), bound,
                     bound < kResolvableEvents / c.replicas);
    }
  }
}

void run_variance_scan(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const int n = c.group.rank;
  r.record_fields.clear();
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("count", theta));
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    const AngleSet a = powered_haar_angles(c.group, c.m, rng);
    std::vector<double> out;
    for (double theta : c.theta_grid) out.push_back(counting_function(a, theta));
    return out;
  });
  for (std::size_t i = 0; i < c.theta_grid.size(); ++i) {
    const double theta = c.theta_grid[i];
    const std::vector<double> counts = column(r, i);
    add_summary(r, theta_label("count", theta), counts);
    const PowerMoments exact = power_count_moments(n, c.m, theta);
    add_comparison(r, theta_label("variance <= m(log(N/m)+1)", theta), theta, exact.variance, exact.variance_bound);
    if (c.replicas >= 2) {
      const MomentSummary mc = summarize(counts);
      add_comparison(r, theta_label("|mc variance - block variance| <= 3 se", theta), theta,
                     std::abs(mc.variance - exact.variance), 3.0 * mc.variance_se);
    }
  }
}

void run_coupling_check(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const int n = c.group.rank;
  const std::size_t nt = c.theta_grid.size();
  const GroupSpec su = make_group(GroupFamily::SpecialUnitary, n);
  r.record_fields.clear();
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("composed", theta));
  for (double theta : c.theta_grid) r.record_fields.push_back(format_abscissa("direct", theta));
  r.record_fields.push_back("roundtrip_error");
  r.record_fields.push_back("scaled_phase");
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    RngStream direct_rng = stream.substream(kSecondary);
    RngStream phase_rng = stream.substream(kPhase);
    const double phase = phase_rng.uniform(0.0, kTwoPi / n);
    const MatrixSample v = sample_haar(su, rng);
    const MatrixSample composed = compose_coupling(phase, v);
    const MatrixSample direct = sample_haar(c.group, direct_rng);

    const CouplingParts back = decompose_unitary(composed);
    double err = std::max(std::abs(back.theta - phase), (back.v.entries - v.entries).cwiseAbs().maxCoeff());
    const CouplingParts parts = decompose_unitary(direct);
    const MatrixSample rebuilt = compose_coupling(parts.theta, parts.v);
    err = std::max(err, (rebuilt.entries - direct.entries).cwiseAbs().maxCoeff());

    const AngleSet ac = eigenangles(composed);
    const AngleSet ad = eigenangles(direct);
    std::vector<double> out;
    for (double theta : c.theta_grid) out.push_back(counting_function(ac, theta));
    for (double theta : c.theta_grid) out.push_back(counting_function(ad, theta));
    out.push_back(err);
    out.push_back(parts.theta * n);
    return out;
  });
  for (std::size_t i = 0; i < nt; ++i) {
    const double theta = c.theta_grid[i];
    add_test(r, theta_label("composed vs direct", theta), theta,
             two_sample_count_test(int_column(r, i), int_column(r, nt + i)));
  }
  const std::vector<double> err = column(r, 2 * nt);
  add_summary(r, "roundtrip_error", err);
  add_comparison(r, "max roundtrip error", 0.0, *std::max_element(err.begin(), err.end()), kRoundTripTol);
  add_test(r, "uniformity of N * arg(det U) / N", 0.0, uniformity_test(column(r, 2 * nt + 1)));
}

void run_lipschitz_check(ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  const int n = c.group.rank;
  const double lip = lipschitz_constant(n, c.p);
  r.record_fields = {"distance", "hs_norm", "bound"};
  r.records = run_replicas(c, [&](std::uint64_t, const RngStream& stream) {
    RngStream rng = stream.substream(kPrimary);
    const MatrixSample a = sample_haar(c.group, rng);
    const MatrixSample b = sample_haar(c.group, rng);
    const double w = wasserstein_exact(CircularMeasure::from_angles(eigenangles(a)),
                                       CircularMeasure::from_angles(eigenangles(b)), c.p)
                         .value;
    const double hs = (a.entries - b.entries).norm();
    return std::vector<double>{w, hs, lip * hs};
  });
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& rec : r.records) worst = std::max(worst, rec.values[0] - rec.values[2]);
  add_summary(r, "distance", column(r, 0));
  add_comparison(r, "max(W_p - L * HS)", 0.0, worst, kLipschitzSlack);
  if (c.p == 2.0) {
    const CircularMeasure at_one = CircularMeasure::equal_weights(std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const CircularMeasure at_minus_one =
        CircularMeasure::equal_weights(std::vector<double>(static_cast<std::size_t>(n), std::numbers::pi));
    const double w = wasserstein_exact(at_one, at_minus_one, 2.0).value;
    const double hs = 2.0 * std::sqrt(static_cast<double>(n));
    add_comparison(r, "equality case |W_2(I, -I) - 2|", 0.0, std::abs(w - 2.0), kEqualityTol);
    add_comparison(r, "equality case |L * ||2I||_HS - 2|", 0.0, std::abs(lip * hs - 2.0), kEqualityTol);
  }
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kExperimentNames) {
    if (k == kind) return name;
  }
  return "?";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperimentNames) {
    if (n == name) return k;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::string_view transport_method_name(TransportMethod method) {
  return method == TransportMethod::ExactFlow ? "exact" : "shift";
}

TransportMethod parse_transport_method(std::string_view name) {
  if (name == "exact") return TransportMethod::ExactFlow;
  if (name == "shift") return TransportMethod::MonotoneShift;
  throw std::invalid_argument("unknown transport method '" + std::string(name) + "' (expected exact|shift)");
}

std::vector<std::string> supported_pairs() {
  std::vector<std::string> out;
  for (const auto& [kind, families] : support_table()) {
    for (GroupFamily f : families) out.push_back(std::string(experiment_name(kind)) + ":" + std::string(group_family_name(f)));
  }
  return out;
}

void validate(const ExperimentConfig& c) {
  const auto& families = support_table().at(c.experiment);
  if (std::find(families.begin(), families.end(), c.group.family) == families.end()) {
    std::string list;
    for (const auto& s : supported_pairs()) list += (list.empty() ? "" : ", ") + s;
    throw std::invalid_argument("unsupported combination " + std::string(experiment_name(c.experiment)) + ":" +
                                std::string(group_family_name(c.group.family)) + "; supported: " + list);
  }
  if (c.group.rank < 1) throw std::invalid_argument("experiment: rank must be >= 1");
  if (c.replicas < 1) throw std::invalid_argument("experiment: replicas must be >= 1");
  if (c.m < 1) throw std::invalid_argument("experiment: m must be >= 1");
  if (!(c.p >= 1.0)) throw std::invalid_argument("experiment: p must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha <= 0.1)) throw std::invalid_argument("experiment: alpha must lie in (0, 0.1]");
  if (c.discretization < 0) throw std::invalid_argument("experiment: discretization must be >= 0");

  const bool needs_theta = c.experiment == ExperimentKind::CountDistribution ||
                           c.experiment == ExperimentKind::RainsEquivalence ||
                           c.experiment == ExperimentKind::VarianceScan ||
                           c.experiment == ExperimentKind::CouplingCheck;
  if (needs_theta) {
    if (c.theta_grid.empty()) throw std::invalid_argument("experiment: theta_grid must be nonempty");
    const double top = c.experiment == ExperimentKind::CountDistribution && c.group.family != GroupFamily::Unitary
                           ? std::numbers::pi
                           : kTwoPi;
    for (double theta : c.theta_grid) {
      if (!(theta > 0.0 && theta <= top)) {
        throw std::invalid_argument("experiment: theta_grid value " + std::to_string(theta) +
                                    " outside the domain (0, " + std::to_string(top) + "]");
      }
    }
  }
  if (c.experiment == ExperimentKind::CountDistribution && c.m != 1) {
    throw std::invalid_argument("count_distribution: only m = 1 is supported");
  }
  const bool needs_t = c.experiment == ExperimentKind::TailProbability ||
                       c.experiment == ExperimentKind::EigenangleConcentration;
  if (needs_t) {
    if (c.t_grid.empty()) throw std::invalid_argument("experiment: t_grid must be nonempty");
    for (double t : c.t_grid) {
      if (!(t > 0.0)) throw std::invalid_argument("experiment: t_grid values must be > 0");
    }
  }
  const int size = c.group.matrix_size();
  const bool needs_m_le_n = needs_t || c.experiment == ExperimentKind::VarianceScan;
  if (needs_m_le_n && c.m > size) throw std::invalid_argument("experiment: requires m <= N");
  if (c.experiment == ExperimentKind::EigenangleConcentration) {
    for (int j : concentration_indices(c)) {
      if (j < 1 || j > size) throw std::invalid_argument("experiment: eigenangle index out of range");
    }
  }
}

bool ExperimentResult::pass() const {
  return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.pass; }) &&
         std::all_of(tests.begin(), tests.end(), [](const auto& t) { return t.pass; });
}

bool ExperimentResult::same_outcome(const ExperimentResult& o) const {
  return config == o.config && record_fields == o.record_fields && records == o.records && summary == o.summary &&
         comparisons == o.comparisons && tests == o.tests && provenance == o.provenance;
}

bool flags_consistent(const ExperimentResult& r) {
  for (const auto& c : r.comparisons) {
    if (c.pass != (c.vacuous || c.empirical <= c.bound)) return false;
  }
  for (const auto& t : r.tests) {
    if (t.pass != (t.p_value > t.alpha)) return false;
  }
  return true;
}

std::string_view code_version() { return SMLAB_VERSION; }

int thread_budget() {
  if (const char* env = std::getenv("SMLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.config = config;
  r.provenance = {config.master_seed, std::string(code_version())};
  switch (config.experiment) {
    case ExperimentKind::MeanDistance:
      run_mean_distance(r);
      break;
    case ExperimentKind::TailProbability:
      run_tail_probability(r);
      break;
    case ExperimentKind::CountDistribution:
      run_count_distribution(r);
      break;
    case ExperimentKind::RainsEquivalence:
      run_rains_equivalence(r);
      break;
    case ExperimentKind::EigenangleConcentration:
      run_eigenangle_concentration(r);
      break;
    case ExperimentKind::VarianceScan:
      run_variance_scan(r);
      break;
    case ExperimentKind::CouplingCheck:
      run_coupling_check(r);
      break;
    case ExperimentKind::LipschitzCheck:
      run_lipschitz_check(r);
      break;
  }
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace smlab

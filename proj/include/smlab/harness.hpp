#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smlab/group_sampler.hpp"
#include "smlab/transport.hpp"

namespace smlab {

enum class ExperimentKind {
  MeanDistance,
  TailProbability,
  CountDistribution,
  RainsEquivalence,
  EigenangleConcentration,
  VarianceScan,
  CouplingCheck,
  LipschitzCheck,
};

std::string_view experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);
std::string_view transport_method_name(TransportMethod method);
TransportMethod parse_transport_method(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::MeanDistance;
  GroupSpec group;
  int m = 1;
  double p = 1.0;
  int replicas = 1000;
  /// Arc endpoints for count experiments.
  std::vector<double> theta_grid;
  /// Deviation grid: t for TailProbability, u for EigenangleConcentration.
  std::vector<double> t_grid;
  /// 1-based eigenangle indices for EigenangleConcentration (empty: 1, N/2, N).
  std::vector<int> indices;
  std::uint64_t master_seed = 0;
  TransportMethod transport_method = TransportMethod::ExactFlow;
  int discretization = 0;  ///< K; 0 selects default_discretization
  double alpha = 1e-3;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws std::invalid_argument on an out-of-range field.
void validate(const ExperimentConfig& config);

struct ReplicaRecord {
  std::uint64_t index = 0;
  std::vector<double> values;  ///< laid out as ExperimentResult::record_fields
  bool operator==(const ReplicaRecord&) const = default;
};

struct SummaryStat {
  std::string name;
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t count = 0;
  bool operator==(const SummaryStat&) const = default;
};

/// `pass` is always `empirical <= bound`, unless `vacuous` (the bound is too
/// small for the replica count to resolve), in which case it is true.
struct BoundComparison {
  std::string label;
  double abscissa = 0.0;  ///< theta, t or u
  double empirical = 0.0;
  double bound = 0.0;
  bool vacuous = false;
  bool pass = false;
  bool operator==(const BoundComparison&) const = default;
};

struct TestOutcome {
  std::string label;
  double abscissa = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  double alpha = 1e-3;
  std::string method;
  bool pass = false;  ///< p_value > alpha
  bool operator==(const TestOutcome&) const = default;
};

struct Provenance {
  std::uint64_t master_seed = 0;
  std::string code_version;
  bool operator==(const Provenance&) const = default;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> record_fields;
  std::vector<ReplicaRecord> records;
  std::vector<SummaryStat> summary;
  std::vector<BoundComparison> comparisons;
  std::vector<TestOutcome> tests;
  double wall_time_seconds = 0.0;
  Provenance provenance;

  bool pass() const;
  /// Field-wise equality ignoring wall time.
  bool same_outcome(const ExperimentResult& other) const;
};

std::string_view code_version();

/// Worker count: SMLAB_THREADS when set, else the hardware concurrency.
int thread_budget();

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Supported (group family, experiment) pairs, as "experiment:group" strings.
std::vector<std::string> supported_pairs();

/// Recompute every pass flag from the recorded numbers.
bool flags_consistent(const ExperimentResult& result);

}  // namespace smlab

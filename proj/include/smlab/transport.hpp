#pragma once

#include <optional>
#include <vector>

#include "smlab/group_sampler.hpp"
#include "smlab/spectral.hpp"

namespace smlab {

/// Probability measure on the unit circle given by atoms (angles) and weights.
struct CircularMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;

  std::size_t size() const { return atoms.size(); }
  bool has_equal_weights(double tol = 1e-12) const;

  static CircularMeasure equal_weights(std::vector<double> atoms);
  static CircularMeasure from_angles(const AngleSet& a);
};

/// Throws std::invalid_argument if atoms are out of [0, 2pi), weights are
/// negative, or the weights do not sum to 1 within 1e-12.
void validate(const CircularMeasure& mu);

enum class CostModel { Chord, Geodesic };
enum class TransportMethod { ExactFlow, MonotoneShift };

struct PlanEntry {
  int source = 0;
  int target = 0;
  double mass = 0.0;
};

struct TransportResult {
  double value = 0.0;
  double p = 1.0;
  CostModel cost_model = CostModel::Chord;
  TransportMethod method = TransportMethod::ExactFlow;
  std::optional<std::vector<PlanEntry>> plan;
  double lower = 0.0;  ///< the true distance lies in [lower, upper]
  double upper = 0.0;
};

/// |e^{ix} - e^{iy}|^p = (2 sin(d/2))^p with d the geodesic distance.
double chord_cost(double x, double y, double p);
/// d^p with d in [0, pi] the geodesic distance.
double geodesic_cost(double x, double y, double p);

inline constexpr std::size_t kMaxAtomsPerMeasure = 4096;
inline constexpr std::size_t kMaxTransportArcs = std::size_t{1} << 22;

/// Exact W_p between two discrete measures by solving the transportation
/// problem with an integer network simplex.
TransportResult wasserstein_exact(const CircularMeasure& a, const CircularMeasure& b, double p,
                                  CostModel cost_model = CostModel::Chord);

/// Uniform measure on the circle discretised into K equal atoms at the
/// midpoints of K equal arcs.
CircularMeasure uniform_discretization(int k);

/// mass 1/N at each of the points 2 pi j / N, j = 1..N (wrapped into [0, 2pi)).
CircularMeasure grid_measure(int n);

/// W_p(a, uniform), with the uniform measure discretised into K atoms (K a
/// multiple of the atom count, K <= 4096). The bracket widens the exact value
/// by 2pi/K, which bounds the discretisation error.
TransportResult wasserstein_empirical_uniform(const CircularMeasure& a, double p, int k);

/// Upper bound on the chord-cost W_p(a, uniform) from the best rotation of the
/// cyclically monotone assignment of consecutive equal arcs to the sorted
/// atoms. Requires equal weights.
TransportResult monotone_shift_estimate(const CircularMeasure& a, double p);

/// Same construction against the K-atom discretised uniform measure (K a
/// multiple of the atom count); every integer rotation is evaluated, so the
/// result is an upper bound on wasserstein_exact(a, uniform_discretization(K)).
TransportResult monotone_shift_estimate(const CircularMeasure& a, double p, int k);

/// Distance from the spectral measure of M^m to the uniform measure. For
/// ExactFlow, `k` is the discretisation count (0 selects the largest multiple
/// of N not exceeding min(32 N, 4096)).
TransportResult spectral_measure_distance(const MatrixSample& m, int power, double p,
                                          TransportMethod method, int k = 0);

/// Discretisation count used by spectral_measure_distance for `k = 0`.
int default_discretization(int atom_count);

}  // namespace smlab

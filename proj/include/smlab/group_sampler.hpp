#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "smlab/rng.hpp"

namespace smlab {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

enum class GroupFamily {
  Unitary,
  SpecialUnitary,
  Orthogonal,
  SpecialOrthogonal,
  NegOrthogonal,  ///< the coset SO-(N) = {U in O(N) : det U = -1}
  Symplectic,
};

/// A compact classical group (or the SO- coset) with its rank parameter.
/// For the symplectic group the matrices are 2N x 2N complex.
struct GroupSpec {
  GroupFamily family = GroupFamily::Unitary;
  int rank = 1;

  int matrix_size() const { return family == GroupFamily::Symplectic ? 2 * rank : rank; }
  bool is_orthogonal_type() const {
    return family == GroupFamily::Orthogonal || family == GroupFamily::SpecialOrthogonal ||
           family == GroupFamily::NegOrthogonal;
  }
  bool is_unitary_type() const {
    return family == GroupFamily::Unitary || family == GroupFamily::SpecialUnitary;
  }
  bool operator==(const GroupSpec&) const = default;
};

/// Validating constructor; throws std::invalid_argument when rank < 1 or the
/// coset is empty (SO-(1) has no nontrivial structure but exists: {-1}).
GroupSpec make_group(GroupFamily family, int rank);

/// Short names used by the CLI and result files: u, su, o, so, so-, sp.
std::string_view group_family_name(GroupFamily family);
GroupFamily parse_group_family(std::string_view name);
std::string describe(const GroupSpec& spec);

struct SeedTrace {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  bool operator==(const SeedTrace&) const = default;
};

struct MatrixSample {
  ComplexMatrix entries;
  GroupSpec spec;
  SeedTrace seed_trace;
};

/// Membership tolerances shared by the sampler and its consumers.
inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kDeterminantTol = 1e-8;

struct MembershipResidual {
  double unitarity = 0.0;    ///< max |M M* - I|
  double determinant = 0.0;  ///< distance of det from its required value (or of |det| from 1)
  double symplectic = 0.0;   ///< max |M^T J M - J|, zero for other families
};

MembershipResidual membership_residual(const MatrixSample& sample);
/// Throws std::domain_error naming the violated constraint.
void check_membership(const MatrixSample& sample);

/// Standard skew form J = [[0, I], [-I, 0]] of size 2n.
ComplexMatrix symplectic_form(int n);

/// n x n matrix of i.i.d. standard complex gaussians (E|z|^2 = 1).
ComplexMatrix sample_ginibre(int n, RngStream& rng);
/// n x n matrix of i.i.d. real standard gaussians.
RealMatrix sample_real_ginibre(int n, RngStream& rng);

/// Haar-distributed element of the group or coset described by `spec`.
MatrixSample sample_haar(const GroupSpec& spec, RngStream& rng);

/// Returns e^{i theta} V. With theta uniform on [0, 2pi/N) independent of a
/// Haar V in SU(N), the product is Haar on U(N).
MatrixSample compose_coupling(double theta, const MatrixSample& v);

struct CouplingParts {
  double theta = 0.0;  ///< in [0, 2pi/N)
  MatrixSample v;      ///< special unitary
};

/// Inverse of compose_coupling: theta = arg(det U) / N with arg in [0, 2pi),
/// V = e^{-i theta} U.
CouplingParts decompose_unitary(const MatrixSample& u);

}  // namespace smlab

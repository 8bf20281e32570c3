#include "smlab/group_sampler.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace smlab {

namespace {

using Complex = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRankDeficient = 1e-300;
constexpr int kMaxRankDeficientDraws = 2;

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// QR of a Ginibre draw with the diagonal of R rotated onto the positive reals.
// Returns false if R is numerically singular.
template <typename Matrix>
bool haar_from_qr(const Matrix& g, Matrix& q) {
  Eigen::HouseholderQR<Matrix> qr(g);
  q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const auto rjj = r(j, j);
    const double mod = std::abs(rjj);
    if (!(mod >= kRankDeficient)) return false;
    q.col(j) *= rjj / mod;
  }
  return true;
}

ComplexMatrix sample_unitary(int n, RngStream& rng) {
  ComplexMatrix q;
  for (int attempt = 0; attempt < kMaxRankDeficientDraws; ++attempt) {
    if (haar_from_qr(sample_ginibre(n, rng), q)) return q;
  }
  throw std::runtime_error("sample_haar: rank-deficient Ginibre draw after resampling");
}

RealMatrix sample_orthogonal(int n, RngStream& rng) {
  RealMatrix q;
  for (int attempt = 0; attempt < kMaxRankDeficientDraws; ++attempt) {
    if (haar_from_qr(sample_real_ginibre(n, rng), q)) return q;
  }
  throw std::runtime_error("sample_haar: rank-deficient Ginibre draw after resampling");
}

RealMatrix sample_special_orthogonal(int n, RngStream& rng) {
  for (;;) {
    RealMatrix q = sample_orthogonal(n, rng);
    if (q.determinant() > 0.0) return q;
  }
}

// tau(v) = -J conj(v); an antiunitary map with tau^2 = -1 whose fixed
// structure defines Sp(N) inside U(2N).
Eigen::VectorXcd quaternionic_partner(const Eigen::VectorXcd& v) {
  const Eigen::Index n = v.size() / 2;
  Eigen::VectorXcd out(v.size());
  out.head(n) = -v.tail(n).conjugate();
  out.tail(n) = v.head(n).conjugate();
  return out;
}

// Quaternionic Gram-Schmidt on complex gaussian columns: column k and its
// partner tau(column k) are orthogonalised together, which is the QR
// factorisation of a quaternionic Ginibre matrix with positive R-diagonal.
ComplexMatrix sample_symplectic(int n, RngStream& rng) {
  const int dim = 2 * n;
  ComplexMatrix u(dim, dim);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd v;
    double norm = 0.0;
    for (int attempt = 0;; ++attempt) {
      v.resize(dim);
      for (int i = 0; i < dim; ++i) v(i) = Complex(rng.normal(), rng.normal()) * std::sqrt(0.5);
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < k; ++i) {
          v -= u.col(i) * u.col(i).dot(v);
          v -= u.col(n + i) * u.col(n + i).dot(v);
        }
      }
      norm = v.norm();
      if (norm >= kRankDeficient) break;
      if (attempt + 1 >= kMaxRankDeficientDraws) {
        throw std::runtime_error("sample_haar: rank-deficient quaternionic Ginibre draw");
      }
    }
    u.col(k) = v / norm;
    u.col(n + k) = quaternionic_partner(u.col(k));
  }
  return u;
}

Complex determinant_of(const ComplexMatrix& m) { return m.partialPivLu().determinant(); }

}  // namespace

GroupSpec make_group(GroupFamily family, int rank) {
  if (rank < 1) throw std::invalid_argument("GroupSpec: rank must be >= 1");
  return GroupSpec{family, rank};
}

std::string_view group_family_name(GroupFamily family) {
  switch (family) {
    case GroupFamily::Unitary: return "u";
    case GroupFamily::SpecialUnitary: return "su";
    case GroupFamily::Orthogonal: return "o";
    case GroupFamily::SpecialOrthogonal: return "so";
    case GroupFamily::NegOrthogonal: return "so-";
    case GroupFamily::Symplectic: return "sp";
  }
  return "?";
}

GroupFamily parse_group_family(std::string_view name) {
  if (name == "u") return GroupFamily::Unitary;
  if (name == "su") return GroupFamily::SpecialUnitary;
  if (name == "o") return GroupFamily::Orthogonal;
  if (name == "so") return GroupFamily::SpecialOrthogonal;
  if (name == "so-") return GroupFamily::NegOrthogonal;
  if (name == "sp") return GroupFamily::Symplectic;
  throw std::invalid_argument("unknown group family '" + std::string(name) +
                              "' (expected u, su, o, so, so-, sp)");
}

std::string describe(const GroupSpec& spec) {
  static constexpr const char* kNames[] = {"U", "SU", "O", "SO", "SO-", "Sp"};
  return std::string(kNames[static_cast<int>(spec.family)]) + "(" + std::to_string(spec.rank) + ")";
}

ComplexMatrix symplectic_form(int n) {
  ComplexMatrix j = ComplexMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -ComplexMatrix::Identity(n, n);
  return j;
}

ComplexMatrix sample_ginibre(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_ginibre: n must be >= 1");
  const double scale = std::sqrt(0.5);
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re * scale, im * scale);
    }
  }
  return g;
}

RealMatrix sample_real_ginibre(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_real_ginibre: n must be >= 1");
  RealMatrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  return g;
}

MembershipResidual membership_residual(const MatrixSample& sample) {
  const ComplexMatrix& m = sample.entries;
  const Eigen::Index dim = m.rows();
  MembershipResidual r;
  r.unitarity = max_abs(m * m.adjoint() - ComplexMatrix::Identity(dim, dim));
  const Complex det = determinant_of(m);
  switch (sample.spec.family) {
    case GroupFamily::Unitary:
    case GroupFamily::Orthogonal:
      r.determinant = std::abs(std::abs(det) - 1.0);
      break;
    case GroupFamily::SpecialUnitary:
    case GroupFamily::SpecialOrthogonal:
    case GroupFamily::Symplectic:
      r.determinant = std::abs(det - 1.0);
      break;
    case GroupFamily::NegOrthogonal:
      r.determinant = std::abs(det + 1.0);
      break;
  }
  if (sample.spec.family == GroupFamily::Symplectic) {
    const ComplexMatrix j = symplectic_form(sample.spec.rank);
    r.symplectic = max_abs(m.transpose() * j * m - j);
  }
  return r;
}

void check_membership(const MatrixSample& sample) {
  if (sample.entries.rows() != sample.spec.matrix_size() ||
      sample.entries.cols() != sample.spec.matrix_size()) {
    throw std::domain_error("matrix shape does not match " + describe(sample.spec));
  }
  const MembershipResidual r = membership_residual(sample);
  if (!(r.unitarity <= kUnitarityTol)) {
    throw std::domain_error("unitarity residual " + std::to_string(r.unitarity) + " for " +
                            describe(sample.spec));
  }
  if (!(r.determinant <= kDeterminantTol)) {
    throw std::domain_error("determinant residual " + std::to_string(r.determinant) + " for " +
                            describe(sample.spec));
  }
  if (!(r.symplectic <= kUnitarityTol)) {
    throw std::domain_error("symplectic residual " + std::to_string(r.symplectic));
  }
  if (sample.spec.is_orthogonal_type() && sample.entries.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw std::domain_error("orthogonal sample has nonzero imaginary part");
  }
}

MatrixSample sample_haar(const GroupSpec& spec, RngStream& rng) {
  if (spec.rank < 1) throw std::invalid_argument("sample_haar: rank must be >= 1");
  MatrixSample out;
  out.spec = spec;
  out.seed_trace = {rng.master_seed(), rng.stream_index()};
  const int n = spec.rank;
  switch (spec.family) {
    case GroupFamily::Unitary:
      out.entries = sample_unitary(n, rng);
      break;
    case GroupFamily::SpecialUnitary:
      out.entries = decompose_unitary(MatrixSample{sample_unitary(n, rng), make_group(GroupFamily::Unitary, n), out.seed_trace})
                        .v.entries;
      break;
    case GroupFamily::Orthogonal:
      out.entries = sample_orthogonal(n, rng).cast<Complex>();
      break;
    case GroupFamily::SpecialOrthogonal:
      out.entries = sample_special_orthogonal(n, rng).cast<Complex>();
      break;
    case GroupFamily::NegOrthogonal: {
      RealMatrix q = sample_special_orthogonal(n, rng);
      q.col(0) *= -1.0;
      out.entries = q.cast<Complex>();
      break;
    }
    case GroupFamily::Symplectic:
      out.entries = sample_symplectic(n, rng);
      break;
  }
  check_membership(out);
  return out;
}

MatrixSample compose_coupling(double theta, const MatrixSample& v) {
  if (v.spec.family != GroupFamily::SpecialUnitary) {
    throw std::invalid_argument("compose_coupling: V must be a special unitary sample");
  }
  const int n = v.spec.rank;
  if (!(theta >= 0.0 && theta < kTwoPi / n)) {
    throw std::out_of_range("compose_coupling: theta must lie in [0, 2pi/N)");
  }
  check_membership(v);
  MatrixSample out;
  out.entries = std::polar(1.0, theta) * v.entries;
  out.spec = make_group(GroupFamily::Unitary, n);
  out.seed_trace = v.seed_trace;
  return out;
}

CouplingParts decompose_unitary(const MatrixSample& u) {
  const ComplexMatrix& m = u.entries;
  const Eigen::Index n = m.rows();
  if (n < 1 || m.cols() != n) throw std::invalid_argument("decompose_unitary: matrix must be square");
  const double residual = max_abs(m * m.adjoint() - ComplexMatrix::Identity(n, n));
  if (!(residual <= kUnitarityTol)) {
    throw std::domain_error("decompose_unitary: input is not unitary (residual " +
                            std::to_string(residual) + ")");
  }
  double arg = std::arg(determinant_of(m));
  if (arg < 0.0) arg += kTwoPi;
  if (arg >= kTwoPi) arg = 0.0;
  CouplingParts parts;
  parts.theta = arg / static_cast<double>(n);
  if (parts.theta >= kTwoPi / static_cast<double>(n)) parts.theta = 0.0;
  parts.v.entries = std::polar(1.0, -parts.theta) * m;
  parts.v.spec = make_group(GroupFamily::SpecialUnitary, static_cast<int>(n));
  parts.v.seed_trace = u.seed_trace;
  return parts;
}

}  // namespace smlab

#pragma once

// Finite-dimensional matter algebra: complex matrix observables, density
// states and their expectation functionals, physical equivalence, the GNS
// construction, spectral decomposition and the finite Weyl (clock/shift) pair.
//
// Everything is templated on the real scalar; the complex scalar is
// std::complex<Real>. Units are dimensionless (h = 1).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "wqt/errors.hpp"

namespace wqt::matter {

template <typename Real = double>
using Complex = std::complex<Real>;

template <typename Real = double>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Element of the matter algebra. Adjoint is entrywise conjugate transpose.
template <typename Real = double>
using MatrixObservable = ComplexMatrix<Real>;

inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kEquivalenceTolerance = 1e-10;
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kMultiplicationTolerance = 1e-8;
inline constexpr double kSelfAdjointTolerance = 1e-10;
inline constexpr double kEigenvalueMergeTolerance = 1e-8;

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_self_adjoint(const Eigen::MatrixBase<Derived>& a, double tol = kSelfAdjointTolerance) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

/// Self-adjoint, positive semidefinite, unit trace; checked at construction.
template <typename Real = double>
class DensityState {
 public:
  explicit DensityState(ComplexMatrix<Real> rho) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
      throw Error(ErrorCode::InvalidState, "density matrix must be square and non-empty");
    }
    if (!is_self_adjoint(rho_, kStateTolerance)) throw Error(ErrorCode::InvalidState, "density matrix not self-adjoint");
    if (std::abs(rho_.trace() - Complex<Real>(1)) > kStateTolerance) {
      throw Error(ErrorCode::InvalidState, "density matrix trace differs from 1");
    }
    const ComplexMatrix<Real> h = (rho_ + rho_.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -Real(kStateTolerance)) {
      throw Error(ErrorCode::InvalidState, "density matrix is not positive semidefinite");
    }
  }

  /// |v><v| / <v|v>.
  static DensityState pure(const Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>& v) {
    const Real norm2 = v.squaredNorm();
    if (norm2 == Real(0)) throw Error(ErrorCode::InvalidState, "zero state vector");
    return DensityState(v * v.adjoint() / norm2);
  }

  static DensityState basis(Eigen::Index dim, Eigen::Index k) {
    Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1> v = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>::Zero(dim);
    v(k) = Real(1);
    return pure(v);
  }

  static DensityState maximally_mixed(Eigen::Index dim) {
    return DensityState(ComplexMatrix<Real>::Identity(dim, dim) / Real(dim));
  }

  Eigen::Index dim() const noexcept { return rho_.rows(); }
  const ComplexMatrix<Real>& matrix() const noexcept { return rho_; }

  Real purity() const { return std::real((rho_ * rho_).trace()); }

 private:
  ComplexMatrix<Real> rho_;
};

/// trace(ρA). Throws DimensionMismatch.
template <typename Real, typename Derived>
Complex<Real> expectation(const DensityState<Real>& z, const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != z.dim() || a.cols() != z.dim()) throw Error(ErrorCode::DimensionMismatch, "observable dimension");
  return (z.matrix() * a).trace();
}

/// E_z as a callable value.
template <typename Real = double>
class ExpectationFunctional {
 public:
  explicit ExpectationFunctional(DensityState<Real> state) : state_(std::move(state)) {}

  template <typename Derived>
  Complex<Real> operator()(const Eigen::MatrixBase<Derived>& a) const {
    return expectation(state_, a);
  }

  const DensityState<Real>& state() const noexcept { return state_; }
  Eigen::Index dim() const noexcept { return state_.dim(); }

 private:
  DensityState<Real> state_;
};

/// Matrix units E_ij, ordered by column-major position i + n·j.
template <typename Real = double>
std::vector<ComplexMatrix<Real>> matrix_unit_basis(Eigen::Index n) {
  std::vector<ComplexMatrix<Real>> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      ComplexMatrix<Real> e = ComplexMatrix<Real>::Zero(n, n);
      e(i, j) = Real(1);
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

/// Rank of the span of a set of matrices viewed as vectors.
template <typename Real>
Eigen::Index span_rank(const std::vector<ComplexMatrix<Real>>& set, Eigen::Index n) {
  if (set.empty()) return 0;
  ComplexMatrix<Real> stacked(n * n, static_cast<Eigen::Index>(set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) {
    stacked.col(static_cast<Eigen::Index>(k)) = set[k].reshaped();
  }
  Eigen::ColPivHouseholderQR<ComplexMatrix<Real>> qr(stacked);
  qr.setThreshold(Real(kRankTolerance));
  return qr.rank();
}

struct EquivalenceResult {
  bool equivalent = true;
  /// Index of the first basis element on which the functionals differ.
  std::optional<std::size_t> witness;
  /// False when the basis does not span the full matrix algebra; the verdict is then
  /// only equivalence on the span.
  bool spanning = true;
};

template <typename Real>
EquivalenceResult physically_equivalent(const DensityState<Real>& z1, const DensityState<Real>& z2,
                                        const std::vector<ComplexMatrix<Real>>& basis) {
  if (z1.dim() != z2.dim()) throw Error(ErrorCode::DimensionMismatch, "states of different dimension");
  EquivalenceResult result;
  result.spanning = span_rank(basis, z1.dim()) == z1.dim() * z1.dim();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (std::abs(expectation(z1, basis[k]) - expectation(z2, basis[k])) > Real(kEquivalenceTolerance)) {
      result.equivalent = false;
      result.witness = k;
      break;
    }
  }
  return result;
}

template <typename Real = double>
struct GNSResult {
  Eigen::Index algebra_dim = 0;
  Eigen::Index carrier_dim = 0;
  Eigen::Index null_dim = 0;
  /// G_ij = E(B_i* B_j) over the matrix units.
  ComplexMatrix<Real> gram;
  Real min_gram_eigenvalue = 0;
  /// Largest ‖π(A)π(B) − π(AB)‖ and ‖π(A*) − π(A)*‖ over matrix units, plus the
  /// leak of the null space under left multiplication.
  Real multiplication_residual = 0;
  /// π(B_k) for each matrix unit, in an orthonormal basis of the quotient.
  std::vector<ComplexMatrix<Real>> representation;

  bool gram_psd(double tol = kRankTolerance) const { return min_gram_eigenvalue >= -Real(tol); }
};

/// GNS representation of the matrix algebra induced by E: carrier = algebra
/// modulo the null space {A : E(A*A) = 0}, with π(A)[B] = [AB].
template <typename Real>
GNSResult<Real> gns_construct(const ExpectationFunctional<Real>& e) {
  const Eigen::Index n = e.dim();
  const auto basis = matrix_unit_basis<Real>(n);
  const Eigen::Index m = n * n;

  if (std::abs(e(ComplexMatrix<Real>::Identity(n, n)) - Complex<Real>(1)) > Real(kStateTolerance)) {
    throw Error(ErrorCode::InvalidState, "expectation functional is not normalized");
  }

  GNSResult<Real> out;
  out.algebra_dim = m;
  out.gram.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out.gram(i, j) = e(basis[i].adjoint() * basis[j]);
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(out.gram);
  const auto& evals = es.eigenvalues();
  out.min_gram_eigenvalue = evals.minCoeff();
  if (!out.gram_psd()) throw Error(ErrorCode::InvalidState, "expectation functional is not positive");

  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> null;
  for (Eigen::Index k = 0; k < m; ++k) (evals(k) > Real(kRankTolerance) ? kept : null).push_back(k);
  out.carrier_dim = static_cast<Eigen::Index>(kept.size());
  out.null_dim = m - out.carrier_dim;

  // Orthonormal quotient basis: q_k = v_k / sqrt(λ_k) in coefficient space.
  const Eigen::Index d = out.carrier_dim;
  ComplexMatrix<Real> q(m, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    q.col(c) = es.eigenvectors().col(kept[static_cast<std::size_t>(c)]) / std::sqrt(evals(kept[static_cast<std::size_t>(c)]));
  }
  auto to_matrix = [n](const auto& coeffs) {
    ComplexMatrix<Real> a = coeffs.reshaped(n, n);
    return a;
  };

  Real residual = 0;
  // Null space must be a left ideal for π to be well defined.
  for (Eigen::Index k : null) {
    const ComplexMatrix<Real> v = to_matrix(es.eigenvectors().col(k));
    for (const auto& a : basis) {
      const ComplexMatrix<Real> av = a * v;
      residual = std::max(residual, std::abs(e(av.adjoint() * av)));
    }
  }

  out.representation.reserve(basis.size());
  for (const auto& a : basis) {
    ComplexMatrix<Real> pi(d, d);
    for (Eigen::Index l = 0; l < d; ++l) {
      const ComplexMatrix<Real> image = a * to_matrix(q.col(l));
      const ComplexMatrix<Real> coeffs = q.adjoint() * out.gram * image.reshaped();
      pi.col(l) = coeffs;
    }
    out.representation.push_back(std::move(pi));
  }
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const ComplexMatrix<Real> ab = basis[a] * basis[b];
      ComplexMatrix<Real> pi_ab = ComplexMatrix<Real>::Zero(d, d);
      // ab is again a matrix unit or zero.
      for (std::size_t c = 0; c < basis.size(); ++c) {
        const Complex<Real> coeff = ab.reshaped()(static_cast<Eigen::Index>(c));
        if (coeff != Complex<Real>(0)) pi_ab += coeff * out.representation[c];
      }
      residual = std::max(residual, max_abs(out.representation[a] * out.representation[b] - pi_ab));
    }
    // π(E_ij)* = π(E_ji): the adjoint of unit i + n j is unit j + n i.
    const auto i = static_cast<Eigen::Index>(a) % n;
    const auto j = static_cast<Eigen::Index>(a) / n;
    const auto adj = static_cast<std::size_t>(j + n * i);
    residual = std::max(residual, max_abs(out.representation[a].adjoint() - out.representation[adj]));
  }
  out.multiplication_residual = residual;
  return out;
}

template <typename Real = double>
struct SpectralDecomposition {
  std::vector<Real> eigenvalues;
  std::vector<ComplexMatrix<Real>> projectors;
};

/// Distinct eigenvalues (merged within 1e-8) with orthogonal projectors that sum to 1.
/// Throws NotSelfAdjoint.
template <typename Derived>
auto spectral_decompose(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (!is_self_adjoint(a)) throw Error(ErrorCode::NotSelfAdjoint, "spectral decomposition needs A = A*");

  const ComplexMatrix<Real> h = a.template cast<Complex<Real>>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es((h + h.adjoint()) / Real(2));
  const auto& evals = es.eigenvalues();  // ascending
  const auto& evecs = es.eigenvectors();

  SpectralDecomposition<Real> out;
  Eigen::Index k = 0;
  while (k < evals.size()) {
    Eigen::Index end = k + 1;
    while (end < evals.size() && evals(end) - evals(end - 1) <= Real(kEigenvalueMergeTolerance)) ++end;
    const auto block = evecs.middleCols(k, end - k);
    out.eigenvalues.push_back(evals.segment(k, end - k).mean());
    out.projectors.push_back(block * block.adjoint());
    k = end;
  }
  return out;
}

/// Σ α_k P_k.
template <typename Real>
ComplexMatrix<Real> reconstruct(const SpectralDecomposition<Real>& s) {
  ComplexMatrix<Real> a = ComplexMatrix<Real>::Zero(s.projectors.front().rows(), s.projectors.front().cols());
  for (std::size_t k = 0; k < s.projectors.size(); ++k) a += s.eigenvalues[k] * s.projectors[k];
  return a;
}

/// Clock T = diag(0..N−1) and shift U with U e_j = e_{j−1 mod N}, so that
/// U T U⁻¹ = T + 1 (mod N on the diagonal). With an integer Scalar every
/// entry is exact.
template <typename Scalar = double>
struct WeylPair {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  int modulus = 0;
  Matrix clock;
  Matrix shift;

  /// U is a permutation matrix, so U⁻¹ = Uᵀ.
  Matrix shift_inverse() const { return shift.transpose(); }
};

template <typename Scalar = double>
WeylPair<Scalar> weyl_pair(int modulus) {
  if (modulus < 2) throw Error(ErrorCode::InvalidArgument, "Weyl pair needs N >= 2");
  WeylPair<Scalar> w;
  w.modulus = modulus;
  w.clock = WeylPair<Scalar>::Matrix::Zero(modulus, modulus);
  w.shift = WeylPair<Scalar>::Matrix::Zero(modulus, modulus);
  for (int j = 0; j < modulus; ++j) {
    w.clock(j, j) = Scalar(j);
    w.shift((j + modulus - 1) % modulus, j) = Scalar(1);
  }
  return w;
}

/// diag((k + shift) mod N).
template <typename Scalar>
typename WeylPair<Scalar>::Matrix shifted_clock(const WeylPair<Scalar>& w, int amount) {
  typename WeylPair<Scalar>::Matrix t = WeylPair<Scalar>::Matrix::Zero(w.modulus, w.modulus);
  for (int k = 0; k < w.modulus; ++k) t(k, k) = Scalar(((k + amount) % w.modulus + w.modulus) % w.modulus);
  return t;
}

/// max |U T U⁻¹ − (T + 1 mod N)|; exactly zero for integer scalars.
template <typename Scalar>
auto weyl_defect(const WeylPair<Scalar>& w) {
  const typename WeylPair<Scalar>::Matrix diff = w.shift * w.clock * w.shift_inverse() - shifted_clock(w, 1);
  return diff.cwiseAbs().maxCoeff();
}

/// Hermitian H with exp(2πi H) = U, built from the Fourier eigenbasis of the shift:
/// U v_k = ω^k v_k with v_k = Σ_j ω^{jk} e_j.
template <typename Real = double>
ComplexMatrix<Real> translation_generator(int modulus) {
  if (modulus < 2) throw Error(ErrorCode::InvalidArgument, "Weyl pair needs N >= 2");
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  ComplexMatrix<Real> h = ComplexMatrix<Real>::Zero(modulus, modulus);
  for (int k = 0; k < modulus; ++k) {
    Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1> v(modulus);
    for (int j = 0; j < modulus; ++j) v(j) = std::polar(Real(1), two_pi * Real(j) * Real(k) / Real(modulus));
    h += (Real(k) / Real(modulus)) * (v * v.adjoint()) / Real(modulus);
  }
  return h;
}

/// U_α = exp(2πi α H) for the generator above, via its spectral decomposition.
template <typename Real = double>
ComplexMatrix<Real> time_translation(const ComplexMatrix<Real>& generator, Real alpha) {
  const auto spec = spectral_decompose(generator);
  const Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  ComplexMatrix<Real> u = ComplexMatrix<Real>::Zero(generator.rows(), generator.cols());
  for (std::size_t k = 0; k < spec.projectors.size(); ++k) {
    u += std::polar(Real(1), two_pi * alpha * spec.eigenvalues[k]) * spec.projectors[k];
  }
  return u;
}

}  // namespace wqt::matter

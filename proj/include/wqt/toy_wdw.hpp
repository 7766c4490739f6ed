#pragma once

// Toy Wheeler–de Witt model: ψ(x, y) on [0,1]² obeying (∂²/∂x² − ∂²/∂y²)ψ = 0.
//
// Fields are dense Eigen matrices with row index = x and column index = y.
// Weights for entanglement measures are p ∝ ψ².

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>

#include "wqt/errors.hpp"
#include "wqt/matter.hpp"

namespace wqt::wdw {

template <typename Real = double>
using WaveState = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
using Samples = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// N points per axis on [0,1], spacing h = 1/(N−1).
template <typename Real = double>
struct Grid {
  explicit Grid(Eigen::Index points) : n(points) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 points per axis");
  }

  Eigen::Index n;

  Real spacing() const { return Real(1) / Real(n - 1); }
  Real coord(Eigen::Index i) const { return Real(i) * spacing(); }
};

/// f and g sampled on [lower, lower + (size−1)·spacing].
template <typename Real = double>
struct CharacteristicProfiles {
  Real lower = Real(-1);
  Real spacing = Real(0);
  Samples<Real> f;
  Samples<Real> g;
};

/// Samples f and g on [−1, 2] at the grid spacing, which covers x − y and x + y.
template <typename Real, typename F, typename G>
CharacteristicProfiles<Real> sample_profiles(F&& f, G&& g, const Grid<Real>& grid) {
  CharacteristicProfiles<Real> p;
  p.lower = Real(-1);
  p.spacing = grid.spacing();
  const Eigen::Index count = 3 * (grid.n - 1) + 1;
  p.f.resize(count);
  p.g.resize(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Real s = p.lower + Real(k) * p.spacing;
    p.f(k) = f(s);
    p.g(k) = g(s);
  }
  return p;
}

/// ψ(x_i, y_j) = f(x_i − y_j) + g(x_i + y_j). Throws RangeShortfall when the profiles
/// do not cover [−1, 2] on the grid's spacing.
template <typename Real>
WaveState<Real> dalembert(const CharacteristicProfiles<Real>& p, const Grid<Real>& grid) {
  const Real h = grid.spacing();
  if (std::abs(p.spacing - h) > Real(64) * std::numeric_limits<Real>::epsilon() * h) {
    throw Error(ErrorCode::RangeShortfall, "profile spacing differs from the grid spacing");
  }
  const Real offset_real = -p.lower / h;
  const auto offset = static_cast<Eigen::Index>(std::llround(offset_real));
  if (std::abs(offset_real - Real(offset)) > Real(1e-6) || offset < grid.n - 1) {
    throw Error(ErrorCode::RangeShortfall, "profiles must start at a grid multiple at or below -1");
  }
  const Eigen::Index needed = offset + 2 * (grid.n - 1) + 1;
  if (p.f.size() < needed || p.g.size() < needed) {
    throw Error(ErrorCode::RangeShortfall, "profiles do not reach x + y = 2");
  }
  WaveState<Real> psi(grid.n, grid.n);
  for (Eigen::Index i = 0; i < grid.n; ++i) {
    for (Eigen::Index j = 0; j < grid.n; ++j) psi(i, j) = p.f(offset + i - j) + p.g(offset + i + j);
  }
  return psi;
}

/// Max-norm over interior points of the central-difference (∂²/∂x² − ∂²/∂y²)ψ.
template <typename Derived>
typename Derived::Scalar residual(const Eigen::MatrixBase<Derived>& psi, const Grid<typename Derived::Scalar>& grid) {
  using Real = typename Derived::Scalar;
  if (psi.rows() != grid.n || psi.cols() != grid.n) throw Error(ErrorCode::DimensionMismatch, "field/grid size");
  const Real inv_h2 = Real(1) / (grid.spacing() * grid.spacing());
  Real worst = 0;
  for (Eigen::Index i = 1; i + 1 < grid.n; ++i) {
    for (Eigen::Index j = 1; j + 1 < grid.n; ++j) {
      const Real dxx = psi(i + 1, j) - Real(2) * psi(i, j) + psi(i - 1, j);
      const Real dyy = psi(i, j + 1) - Real(2) * psi(i, j) + psi(i, j - 1);
      worst = std::max(worst, std::abs(dxx - dyy) * inv_h2);
    }
  }
  return worst;
}

/// a(y) = ψ(0, y) and b(y) = ∂ψ/∂x(0, y) on the y-grid.
template <typename Real = double>
struct InitialData {
  Samples<Real> a;
  Samples<Real> b;
};

template <typename Real, typename A, typename B>
InitialData<Real> sample_initial(A&& a, B&& b, const Grid<Real>& grid) {
  InitialData<Real> d;
  d.a.resize(grid.n);
  d.b.resize(grid.n);
  for (Eigen::Index j = 0; j < grid.n; ++j) {
    d.a(j) = a(grid.coord(j));
    d.b(j) = b(grid.coord(j));
  }
  return d;
}

/// Explicit march in x at Δx = Δy with y periodic (y = 1 identified with y = 0):
///   ψ_1 = ½(a_{j+1} + a_{j−1}) + h b_j,
///   ψ_{i+1,j} = ψ_{i,j+1} + ψ_{i,j−1} − ψ_{i−1,j}.
/// Sequential and branch-free in the data, so repeated runs are bit-identical.
template <typename Real>
WaveState<Real> evolve(const InitialData<Real>& init, const Grid<Real>& grid) {
  const Eigen::Index n = grid.n;
  if (init.a.size() != n || init.b.size() != n) throw Error(ErrorCode::DimensionMismatch, "initial data length");
  const Eigen::Index period = n - 1;
  const Real h = grid.spacing();
  auto up = [period](Eigen::Index j) { return (j + 1) % period; };
  auto down = [period](Eigen::Index j) { return (j + period - 1) % period; };

  WaveState<Real> psi(n, n);
  for (Eigen::Index j = 0; j < period; ++j) {
    psi(0, j) = init.a(j);
    psi(1, j) = Real(0.5) * (init.a(up(j)) + init.a(down(j))) + h * init.b(j);
  }
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    for (Eigen::Index j = 0; j < period; ++j) psi(i + 1, j) = psi(i, up(j)) + psi(i, down(j)) - psi(i - 1, j);
  }
  psi.col(period) = psi.col(0);
  return psi;
}

template <typename Real = double>
struct SchmidtSpectrum {
  Samples<Real> singular_values;  // descending
  Samples<Real> weights;          // σ_k² / Σσ²
  Real entropy_bits = 0;
  Eigen::Index rank = 0;          // σ_k / σ_1 > 1e-10
};

inline constexpr double kSchmidtRankCut = 1e-10;

/// SVD of ψ viewed as a bipartite amplitude. Throws ZeroField.
template <typename Derived>
auto schmidt(const Eigen::MatrixBase<Derived>& psi) {
  using Real = typename Derived::Scalar;
  const WaveState<Real> m = psi;
  if (m.squaredNorm() == Real(0)) throw Error(ErrorCode::ZeroField, "Schmidt spectrum of the zero field");
  Eigen::BDCSVD<WaveState<Real>> svd(m);
  SchmidtSpectrum<Real> s;
  s.singular_values = svd.singularValues();
  const Real total = s.singular_values.squaredNorm();
  s.weights = s.singular_values.array().square() / total;
  const Real top = s.singular_values(0);
  for (Eigen::Index k = 0; k < s.weights.size(); ++k) {
    const Real p = s.weights(k);
    if (p > Real(0)) s.entropy_bits -= p * std::log2(p);
    if (s.singular_values(k) / top > Real(kSchmidtRankCut)) ++s.rank;
  }
  return s;
}

/// MI of the joint weights p(i,j) = ψ²/Σψ² in bits, with 0·log 0 = 0. Throws ZeroField.
template <typename Derived>
typename Derived::Scalar mutual_information(const Eigen::MatrixBase<Derived>& psi) {
  using Real = typename Derived::Scalar;
  const WaveState<Real> p = psi.array().square();
  const Real total = p.sum();
  if (total == Real(0)) throw Error(ErrorCode::ZeroField, "mutual information of the zero field");
  const WaveState<Real> joint = p / total;
  const Samples<Real> px = joint.rowwise().sum();
  const Eigen::Matrix<Real, 1, Eigen::Dynamic> py = joint.colwise().sum();
  Real mi = 0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const Real pij = joint(i, j);
      if (pij > Real(0)) mi += pij * std::log2(pij / (px(i) * py(j)));
    }
  }
  return std::max(mi, Real(0));
}

/// How strongly each axis constrains the other: MI relative to the marginal
/// entropy of the constrained axis. The time-like axis is the controlling one.
template <typename Real = double>
struct ControlReport {
  Real mutual_information = 0;
  Real entropy_x = 0;
  Real entropy_y = 0;
  Real x_controls_y = 0;  // MI / H(y)
  Real y_controls_x = 0;  // MI / H(x)
  /// 'x', 'y', or '-' when neither axis controls the other more (symmetric fields).
  char time_like_axis = '-';
};

template <typename Derived>
auto control_report(const Eigen::MatrixBase<Derived>& psi) {
  using Real = typename Derived::Scalar;
  ControlReport<Real> r;
  r.mutual_information = mutual_information(psi);
  const WaveState<Real> p = psi.array().square() / psi.array().square().sum();
  auto entropy = [](const auto& v) {
    Real h = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (v(k) > Real(0)) h -= v(k) * std::log2(v(k));
    }
    return h;
  };
  r.entropy_x = entropy(Samples<Real>(p.rowwise().sum()));
  r.entropy_y = entropy(Samples<Real>(p.colwise().sum().transpose()));
  r.x_controls_y = r.entropy_y > Real(0) ? r.mutual_information / r.entropy_y : Real(0);
  r.y_controls_x = r.entropy_x > Real(0) ? r.mutual_information / r.entropy_x : Real(0);
  const Real gap = r.x_controls_y - r.y_controls_x;
  if (std::abs(gap) <= Real(1e-9) * std::max({r.x_controls_y, r.y_controls_x, Real(1e-300)})) {
    r.time_like_axis = '-';
  } else {
    r.time_like_axis = gap > 0 ? 'x' : 'y';
  }
  return r;
}

/// Zeroes off-diagonal entries in the pointer (computational) basis.
template <typename Real>
matter::DensityState<Real> dephase(const matter::DensityState<Real>& rho) {
  matter::ComplexMatrix<Real> d = rho.matrix().diagonal().asDiagonal();
  return matter::DensityState<Real>(std::move(d));
}

/// CSV with one row per x index and one column per y value.
void write_field_csv(std::ostream& out, const WaveState<double>& psi);
/// Throws InvalidArgument on ragged or non-numeric input.
WaveState<double> read_field_csv(std::istream& in);

}  // namespace wqt::wdw

#include <doctest.h>

#include <functional>

#include "support.hpp"
#include "wqt/matter.hpp"

using namespace wqt;
using namespace wqt::matter;
using wqt::testing::CMatrix;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

CMatrix diag(std::initializer_list<double> values) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double v : values) m(k, k) = v, ++k;
  return m;
}

Eigen::Index numeric_rank(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) r += es.eigenvalues()(k) > 1e-10;
  return r;
}

}  // namespace

TEST_CASE("density states are validated") {
  CHECK(code_of([] { DensityState<double>(diag({0.5, 0.4})); }) == ErrorCode::InvalidState);
  CHECK(code_of([] { DensityState<double>(diag({1.5, -0.5})); }) == ErrorCode::InvalidState);
  CMatrix nonherm = diag({0.5, 0.5});
  nonherm(0, 1) = 0.1;
  CHECK(code_of([&] { DensityState<double>{nonherm}; }) == ErrorCode::InvalidState);
  CHECK(code_of([] { DensityState<double>(CMatrix(2, 3)); }) == ErrorCode::InvalidState);
  CHECK(DensityState<double>::maximally_mixed(4).purity() == doctest::Approx(0.25));
}

TEST_CASE("expectation values") {
  const auto up = DensityState<double>::basis(2, 0);
  CHECK(std::abs(expectation(up, diag({1, -1})) - Complex<double>(1)) < 1e-15);
  const auto mixed = DensityState<double>::maximally_mixed(2);
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(std::abs(expectation(mixed, x)) < 1e-15);
  CHECK(std::abs(expectation(mixed, diag({3, -3}))) < 1e-15);
  CHECK(code_of([&] { expectation(mixed, diag({1, 2, 3})); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("E(A*A) is non-negative exactly when rho is PSD") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    const ExpectationFunctional<double> e(DensityState<double>(testing::random_density(n, 1 + trial % n, rng)));
    const CMatrix a = testing::random_complex(n, rng);
    const auto v = e(a.adjoint() * a);
    CHECK(v.real() >= -1e-12);
    CHECK(std::abs(v.imag()) <= 1e-10);
  }
}

TEST_CASE("physical equivalence") {
  const auto basis = matrix_unit_basis<double>(2);
  SUBCASE("two states wrapping the same matrix") {
    const DensityState<double> a(diag({0.3, 0.7}));
    const DensityState<double> b(diag({0.3, 0.7}));
    const auto r = physically_equivalent(a, b, basis);
    CHECK(r.equivalent);
    CHECK(r.spanning);
  }
  SUBCASE("orthogonal pure states differ on diag(1,-1)") {
    const std::vector<CMatrix> probe{diag({1, -1})};
    const auto r = physically_equivalent(DensityState<double>(diag({1, 0})), DensityState<double>(diag({0, 1})), probe);
    CHECK_FALSE(r.equivalent);
    CHECK(r.witness == std::optional<std::size_t>(0));
    CHECK_FALSE(r.spanning);
  }
  SUBCASE("an equivalence relation on random triples") {
    std::mt19937 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
      const DensityState<double> x(testing::random_density(2, 2, rng));
      const DensityState<double> y(trial % 2 ? x.matrix() : testing::random_density(2, 2, rng));
      const DensityState<double> z(trial % 3 ? y.matrix() : testing::random_density(2, 2, rng));
      CHECK(physically_equivalent(x, x, basis).equivalent);
      CHECK(physically_equivalent(x, y, basis).equivalent == physically_equivalent(y, x, basis).equivalent);
      if (physically_equivalent(x, y, basis).equivalent && physically_equivalent(y, z, basis).equivalent) {
        CHECK(physically_equivalent(x, z, basis).equivalent);
      }
    }
  }
}

TEST_CASE("GNS carrier dimensions") {
  const auto pure = gns_construct(ExpectationFunctional<double>(DensityState<double>::basis(2, 0)));
  CHECK(pure.carrier_dim == 2);
  CHECK(pure.null_dim == 2);
  const auto mixed = gns_construct(ExpectationFunctional<double>(DensityState<double>::maximally_mixed(2)));
  CHECK(mixed.carrier_dim == 4);
  CHECK(mixed.gram_psd());
  CHECK(mixed.multiplication_residual <= 1e-10);
}

TEST_CASE("GNS on random density matrices: carrier = n rank, Gram PSD, representation") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    const Eigen::Index rank = 1 + (trial / 4) % n;
    const CMatrix rho = testing::random_density(n, rank, rng);
    const auto g = gns_construct(ExpectationFunctional<double>(DensityState<double>(rho)));
    CHECK(g.carrier_dim == n * numeric_rank(rho));
    CHECK(g.gram_psd(1e-10));
    CHECK(g.multiplication_residual <= 1e-8);
    CHECK(g.algebra_dim == n * n);
  }
}

TEST_CASE("spectral decomposition") {
  SUBCASE("degenerate diagonal") {
    const auto s = spectral_decompose(diag({1, 1, 2}));
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(s.eigenvalues[0] == doctest::Approx(1));
    CHECK(s.eigenvalues[1] == doctest::Approx(2));
    CHECK(numeric_rank(s.projectors[0]) == 2);
    CHECK(numeric_rank(s.projectors[1]) == 1);
  }
  SUBCASE("Pauli x") {
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const auto s = spectral_decompose(x);
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(s.eigenvalues[0] == doctest::Approx(-1));
    CHECK(s.eigenvalues[1] == doctest::Approx(1));
    const CMatrix id = CMatrix::Identity(2, 2);
    CHECK(max_abs(s.projectors[0] - (id - x) / 2.0) < 1e-12);
    CHECK(max_abs(s.projectors[1] - (id + x) / 2.0) < 1e-12);
  }
  SUBCASE("non-self-adjoint input") {
    CMatrix a = diag({1, 2});
    a(0, 1) = 1;
    CHECK(code_of([&] { spectral_decompose(a); }) == ErrorCode::NotSelfAdjoint);
  }
  SUBCASE("random Hermitian reconstruction and projector algebra") {
    std::mt19937 rng(34);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = 1 + trial % 8;
      const CMatrix a = testing::random_hermitian(n, rng);
      const auto s = spectral_decompose(a);
      CHECK(max_abs(reconstruct(s) - a) <= 1e-8);
      CMatrix sum = CMatrix::Zero(n, n);
      for (std::size_t i = 0; i < s.projectors.size(); ++i) {
        sum += s.projectors[i];
        CHECK(max_abs(s.projectors[i] * s.projectors[i] - s.projectors[i]) <= 1e-8);
        for (std::size_t j = i + 1; j < s.projectors.size(); ++j) {
          CHECK(max_abs(s.projectors[i] * s.projectors[j]) <= 1e-8);
        }
      }
      CHECK(max_abs(sum - CMatrix::Identity(n, n)) <= 1e-8);
    }
  }
}

TEST_CASE("Weyl pair") {
  SUBCASE("N = 4 entrywise") {
    const auto w = weyl_pair<long long>(4);
    const auto lhs = (w.shift * w.clock * w.shift_inverse()).eval();
    for (int k = 0; k < 4; ++k) CHECK(lhs(k, k) == (k + 1) % 4);
    CHECK(weyl_defect(w) == 0);
  }
  SUBCASE("exact for N = 2..12") {
    for (int n = 2; n <= 12; ++n) {
      const auto w = weyl_pair<long long>(n);
      CHECK(weyl_defect(w) == 0);
      Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> power =
          Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
      for (int k = 0; k < n; ++k) power = power * w.shift;
      CHECK(power == Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n));
      CHECK((w.clock * w.shift - w.shift * w.clock).cwiseAbs().maxCoeff() > 0);
    }
  }
  SUBCASE("too small") { CHECK(code_of([] { weyl_pair<int>(1); }) == ErrorCode::InvalidArgument); }
}

TEST_CASE("translation generator reproduces the shift") {
  for (int n = 2; n <= 6; ++n) {
    const CMatrix h = translation_generator<double>(n);
    CHECK(is_self_adjoint(h));
    const CMatrix u = time_translation(h, 1.0);
    const CMatrix shift = weyl_pair<double>(n).shift.cast<Complex<double>>();
    CHECK(max_abs(u - shift) <= 1e-10);
    const CMatrix half = time_translation(h, 0.5);
    CHECK(max_abs(half * half - shift) <= 1e-10);
  }
}

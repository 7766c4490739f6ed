#include <doctest.h>

#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "wqt/toy_wdw.hpp"

using namespace wqt;
using namespace wqt::wdw;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

WaveState<double> product_field(const Grid<double>& g) {
  WaveState<double> psi(g.n, g.n);
  for (Eigen::Index i = 0; i < g.n; ++i) {
    for (Eigen::Index j = 0; j < g.n; ++j) psi(i, j) = std::sin(kTwoPi * g.coord(i)) * std::sin(kTwoPi * g.coord(j));
  }
  return psi;
}

WaveState<double> ridge(const Grid<double>& g, double w) {
  return dalembert(sample_profiles<double>([w](double s) { return std::exp(-s * s / (2 * w * w)); },
                                           [](double) { return 0.0; }, g),
                   g);
}

/// ψ(x, y) = ½[a(y−x) + a(y+x)] + ½∫_{y−x}^{y+x} b for 1-periodic a and antiderivative B of b.
template <typename A, typename B>
WaveState<double> closed_form(const Grid<double>& g, A a, B antiderivative) {
  WaveState<double> psi(g.n, g.n);
  for (Eigen::Index i = 0; i < g.n; ++i) {
    for (Eigen::Index j = 0; j < g.n; ++j) {
      const double x = g.coord(i);
      const double y = g.coord(j);
      psi(i, j) = 0.5 * (a(y - x) + a(y + x)) + 0.5 * (antiderivative(y + x) - antiderivative(y - x));
    }
  }
  return psi;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid<double> g(101);
  CHECK(g.spacing() == doctest::Approx(0.01));
  CHECK(g.coord(100) == doctest::Approx(1.0));
  CHECK(code_of([] { Grid<double>(2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("d'Alembert solutions") {
  const Grid<double> g(101);
  SUBCASE("cosine profiles give the factorizing product") {
    const auto p = sample_profiles<double>([](double s) { return 0.5 * std::cos(kTwoPi * s); },
                                           [](double s) { return -0.5 * std::cos(kTwoPi * s); }, g);
    const auto psi = dalembert(p, g);
    CHECK((psi - product_field(g)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("quadratic profile is solved exactly by central differences") {
    const auto p = sample_profiles<double>([](double s) { return s * s; }, [](double) { return 0.0; }, g);
    const auto psi = dalembert(p, g);
    CHECK(psi(30, 10) == doctest::Approx(0.04));
    CHECK(residual(psi, g) <= 1e-8);
  }
  SUBCASE("zero profiles give the zero field") {
    const auto p = sample_profiles<double>([](double) { return 0.0; }, [](double) { return 0.0; }, g);
    CHECK(dalembert(p, g).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("short or misaligned profiles are rejected") {
    auto p = sample_profiles<double>([](double) { return 1.0; }, [](double) { return 0.0; }, g);
    p.f.conservativeResize(p.f.size() - 1);
    CHECK(code_of([&] { dalembert(p, g); }) == ErrorCode::RangeShortfall);
    auto q = sample_profiles<double>([](double) { return 1.0; }, [](double) { return 0.0; }, g);
    q.lower = -0.5;
    CHECK(code_of([&] { dalembert(q, g); }) == ErrorCode::RangeShortfall);
    CHECK(code_of([&] { dalembert(q, Grid<double>(51)); }) == ErrorCode::RangeShortfall);
  }
}

TEST_CASE("residual") {
  const Grid<double> g(101);
  CHECK(residual(WaveState<double>::Constant(101, 101, 3.0), g) == 0.0);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WaveState<double> noise(101, 101);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = u(rng);
  CHECK(residual(noise, g) >= 10.0 * residual(product_field(g), g));
  CHECK(code_of([&] { residual(noise, Grid<double>(51)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("evolve matches the closed form") {
  SUBCASE("a = sin(2 pi y), b = 0") {
    const Grid<double> g(201);
    const auto init = sample_initial<double>([](double y) { return std::sin(kTwoPi * y); },
                                             [](double) { return 0.0; }, g);
    const auto psi = evolve(init, g);
    const auto exact = closed_form(g, [](double s) { return std::sin(kTwoPi * s); }, [](double) { return 0.0; });
    CHECK((psi - exact).cwiseAbs().maxCoeff() <= 5e-3);
  }
  SUBCASE("nonzero velocity converges at second order") {
    auto error = [](Eigen::Index n) {
      const Grid<double> g(n);
      const auto init = sample_initial<double>([](double y) { return std::sin(kTwoPi * y); },
                                               [](double y) { return std::cos(kTwoPi * y); }, g);
      const auto exact = closed_form(g, [](double s) { return std::sin(kTwoPi * s); },
                                     [](double s) { return std::sin(kTwoPi * s) / kTwoPi; });
      return (evolve(init, g) - exact).cwiseAbs().maxCoeff();
    };
    const double coarse = error(101);
    const double fine = error(201);
    CHECK(fine <= 5e-3);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
  }
  SUBCASE("zero data stays zero") {
    const Grid<double> g(51);
    const auto init = sample_initial<double>([](double) { return 0.0; }, [](double) { return 0.0; }, g);
    CHECK(evolve(init, g).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("repeated runs are bit-identical") {
    const Grid<double> g(101);
    const auto init = sample_initial<double>([](double y) { return std::exp(-40 * (y - 0.5) * (y - 0.5)); },
                                             [](double y) { return y * (1 - y); }, g);
    const auto first = evolve(init, g);
    const auto second = evolve(init, g);
    CHECK(std::memcmp(first.data(), second.data(), sizeof(double) * static_cast<std::size_t>(first.size())) == 0);
  }
  SUBCASE("length mismatch") {
    InitialData<double> bad{Samples<double>::Zero(5), Samples<double>::Zero(4)};
    CHECK(code_of([&] { evolve(bad, Grid<double>(5)); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("Schmidt spectrum") {
  const Grid<double> g(201);
  SUBCASE("product field is rank one") {
    const auto s = schmidt(product_field(g));
    CHECK(s.rank == 1);
    CHECK(s.singular_values(1) / s.singular_values(0) <= 1e-10);
    CHECK(s.entropy_bits <= 1e-8);
  }
  SUBCASE("narrow ridge is entangled") {
    const auto psi = ridge(g, 0.05);
    const auto s = schmidt(psi);
    CHECK(s.entropy_bits >= 1.0);
    CHECK(s.entropy_bits == doctest::Approx(3.2523729042266685).epsilon(1e-8));
    CHECK(s.rank == 48);
    CHECK(s.singular_values.squaredNorm() == doctest::Approx(psi.squaredNorm()).epsilon(1e-10));
  }
  SUBCASE("zero field") { CHECK(code_of([] { schmidt(WaveState<double>::Zero(3, 3)); }) == ErrorCode::ZeroField); }
}

TEST_CASE("mutual information") {
  const Grid<double> g(201);
  CHECK(mutual_information(product_field(g)) <= 1e-12);
  const double wide = mutual_information(ridge(g, 0.2));
  const double mid = mutual_information(ridge(g, 0.1));
  const double narrow = mutual_information(ridge(g, 0.05));
  CHECK(wide < mid);
  CHECK(mid < narrow);
  CHECK(wide == doctest::Approx(1.004869523720086).epsilon(1e-8));
  CHECK(mid == doctest::Approx(1.8842760380357269).epsilon(1e-8));
  CHECK(narrow == doctest::Approx(2.8310906698012124).epsilon(1e-8));

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    WaveState<double> any(n, n + 1);
    for (Eigen::Index i = 0; i < any.size(); ++i) any(i) = u(rng);
    CHECK(mutual_information(any) >= 0.0);
    Samples<double> fx(n);
    Samples<double> fy(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) fx(i) = u(rng);
    for (Eigen::Index j = 0; j <= n; ++j) fy(j) = u(rng) + 2.0;
    CHECK(mutual_information(fx * fy.transpose()) <= 1e-12);
  }
}

TEST_CASE("control report") {
  const Grid<double> g(101);
  const auto sym = control_report(ridge(g, 0.1));
  CHECK(sym.time_like_axis == '-');
  CHECK(sym.x_controls_y == doctest::Approx(sym.y_controls_x));
  // A field uniform in y for every x carries no information either way.
  WaveState<double> flat = WaveState<double>::Ones(g.n, g.n);
  CHECK(control_report(flat).mutual_information <= 1e-12);
  // Rows concentrated on a narrow band of y, spread over all x: x pins y, but y
  // only pins x up to the band.
  WaveState<double> skew = WaveState<double>::Zero(8, 4);
  for (Eigen::Index i = 0; i < 8; ++i) skew(i, i / 2) = 1.0;
  const auto r = control_report(skew);
  CHECK(r.x_controls_y == doctest::Approx(1.0));
  CHECK(r.y_controls_x < 1.0);
  CHECK(r.time_like_axis == 'x');
}

TEST_CASE("dephasing") {
  using matter::ComplexMatrix;
  using matter::DensityState;
  const DensityState<double> diagonal(testing::CMatrix(Eigen::Vector2cd(0.25, 0.75).asDiagonal()));
  CHECK(dephase(diagonal).matrix() == diagonal.matrix());
  Eigen::VectorXcd plus(2);
  plus << 1, 1;
  const auto pure = DensityState<double>::pure(plus);
  CHECK(pure.purity() == doctest::Approx(1.0));
  const auto d = dephase(pure);
  CHECK(d.purity() == doctest::Approx(0.5));
  CHECK(dephase(d).matrix() == d.matrix());
}

TEST_CASE("field CSV round trip") {
  const Grid<double> g(11);
  const auto psi = product_field(g);
  std::stringstream io;
  write_field_csv(io, psi);
  const auto back = read_field_csv(io);
  CHECK((back - psi).cwiseAbs().maxCoeff() <= 1e-11);
  std::stringstream ragged("1,2\n3\n");
  CHECK(code_of([&] { read_field_csv(ragged); }) == ErrorCode::InvalidArgument);
  std::stringstream text("1,x\n");
  CHECK(code_of([&] { read_field_csv(text); }) == ErrorCode::InvalidArgument);
}

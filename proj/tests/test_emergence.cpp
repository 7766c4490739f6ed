#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "wqt/emergence.hpp"

using namespace wqt;

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

/// Tuples of K values in [−m, m] with |t_k − t_1 − δ_k| ≤ band, by direct enumeration.
std::vector<std::vector<int>> enumerate_sync(std::size_t agents, const std::vector<int>& offsets, int m, int band) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(agents, -m);
  while (true) {
    bool ok = true;
    for (std::size_t k = 1; k < agents; ++k) ok = ok && std::abs(t[k] - t[0] - offsets[k - 1]) <= band;
    if (ok) out.push_back(t);
    std::size_t k = agents;
    while (k > 0 && t[k - 1] == m) t[--k] = -m;
    if (k == 0) break;
    ++t[k - 1];
  }
  return out;
}

/// 1 − |joint| / (|marginal_i| |marginal_j|) from the enumerated tuples.
double enumerated_score(const std::vector<std::vector<int>>& tuples, std::size_t i, std::size_t j) {
  std::set<std::pair<int, int>> joint;
  std::set<int> mi;
  std::set<int> mj;
  for (const auto& t : tuples) {
    joint.insert({t[i], t[j]});
    mi.insert(t[i]);
    mj.insert(t[j]);
  }
  return 1.0 - static_cast<double>(joint.size()) / static_cast<double>(mi.size() * mj.size());
}

}  // namespace

TEST_CASE("time labels") {
  CHECK(time_labels(2) == std::vector<std::string>{"-2", "-1", "now", "+1", "+2"});
  CHECK(time_value("now") == 0);
  CHECK(time_value("+3") == 3);
  CHECK(time_value("-1") == -1);
  CHECK(code_of([] { time_value("soon"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { time_value("+0"); }) == ErrorCode::InvalidArgument);
  for (int v = -5; v <= 5; ++v) CHECK(time_value(time_label(v)) == v);
}

TEST_CASE("synchronization certainty sets") {
  CHECK(build_sync_state(2, {0}, 2).proposition.certainty_set().size() == 5);
  CHECK(build_sync_state(2, {1}, 2).proposition.certainty_set().size() == 4);
  const auto three = build_sync_state(3, {0, 1}, 2);
  CHECK(three.proposition.certainty_set().size() == 4);
  // Each agent's marginal covers its clipped range: t ∈ [−2, 1] for the first two, [−1, 2] for the third.
  for (std::size_t k = 0; k < 3; ++k) {
    const auto tk = make_time_observable(three.composite, k, 2);
    const auto other = make_time_observable(three.composite, (k + 1) % 3, 2);
    const auto table = sync_table(three, tk, other);
    CHECK(table.marginal1.size() == 4);
    CHECK(table.marginal1.front() == (k == 2 ? 1u : 0u));
  }
}

TEST_CASE("certainty sets match enumeration for random offsets") {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t agents = 2 + trial % 3;
    const int m = 1 + trial % 3;
    std::uniform_int_distribution<int> off(-m, m);
    std::vector<int> offsets(agents - 1);
    for (auto& d : offsets) d = off(rng);
    const int band = trial % 2;
    const auto expected = enumerate_sync(agents, offsets, m, band);
    if (expected.empty()) {
      CHECK(code_of([&] { build_sync_state(agents, offsets, m, band); }) == ErrorCode::EmptyPreparation);
      continue;
    }
    const auto prep = build_sync_state(agents, offsets, m, band);
    CHECK(prep.proposition.certainty_set().size() == expected.size());
    for (std::size_t i = 0; i < agents; ++i) {
      for (std::size_t j = i + 1; j < agents; ++j) {
        const auto ti = make_time_observable(prep.composite, i, m);
        const auto tj = make_time_observable(prep.composite, j, m);
        CHECK(sync_score(prep, ti, tj) == enumerated_score(expected, i, j));
      }
    }
  }
}

TEST_CASE("sync scores") {
  const auto exact = build_sync_state(2, {0}, 2);
  const auto t1 = make_time_observable(exact.composite, 0, 2);
  const auto t2 = make_time_observable(exact.composite, 1, 2);
  const auto table = sync_table(exact, t1, t2);
  CHECK(table.score == 1.0 - 5.0 / 25.0);
  CHECK(table.functional_dependence());

  const auto band = build_sync_state(2, {0}, 2, 1);
  const double banded = sync_score(band, make_time_observable(band.composite, 0, 2),
                                   make_time_observable(band.composite, 1, 2));
  CHECK(banded == 1.0 - 13.0 / 25.0);
  CHECK(banded > 0.0);
  CHECK(banded < table.score);

  const auto full = build_sync_state(2, {0}, 2, 4);
  CHECK(sync_score(full, make_time_observable(full.composite, 0, 2), make_time_observable(full.composite, 1, 2)) ==
        0.0);
  CHECK(code_of([&] { sync_table(exact, t1, t1); }) == ErrorCode::SameSlot);
}

TEST_CASE("sync argument validation") {
  CHECK(code_of([] { build_sync_state(1, {}, 2); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_sync_state(3, {0}, 2); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_sync_state(2, {3}, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("time observables commute across slots") {
  const auto prep = build_sync_state(3, {0, 1}, 2);
  std::vector<TimeObservable> times;
  for (std::size_t k = 0; k < 3; ++k) times.push_back(make_time_observable(prep.composite, k, 2));
  times[2].kind = TimeKind::Clock;
  CHECK(verify_time_commutativity(times).all_commute);

  SUBCASE("a noncommuting observable on the same slot is caught") {
    const SpacePtr window = time_window(1);
    std::vector<SpectralProjection> family;
    for (StateIndex z = 0; z < 3; ++z) {
      const StateIndex member[] = {z};
      family.push_back({window->label(z), Proposition::filter(window, member)});
    }
    // Every state collapses onto "now": the map crosses blocks.
    const Observable collapse(Map::constant(window, 1), family);
    const CompositeSystem c({window, window});
    TimeObservable sharp = make_time_observable(c, 0, 1);
    TimeObservable moved{0, TimeKind::Clock, 1, c.lift(collapse, 0)};
    const std::vector<TimeObservable> pair{sharp, moved};
    const auto report = verify_time_commutativity(pair);
    CHECK_FALSE(report.all_commute);
    REQUIRE(report.witnesses.size() == 1);
    CHECK(report.witnesses[0].first == 0);
    CHECK(report.witnesses[0].second == 1);
  }
  CHECK(code_of([&] { make_time_observable(prep.composite, 0, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("operationalization") {
  const auto t = make_time_observable(2);
  SUBCASE("bijection onto integers keeps the blocks") {
    const auto op = operationalize(t, OperationalizationMap::to_integers(2));
    CHECK(op.bijective);
    CHECK(op.order_preserving);
    CHECK_FALSE(op.now_retained);
    CHECK(op.observable.spectrum() == std::vector<std::string>{"-2", "-1", "0", "1", "2"});
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(op.observable.family()[k].projection == t.observable.family()[k].projection);
    }
    CHECK(verify_spectral_family(op.observable).passed());
  }
  SUBCASE("coarse graining joins the negative labels into the past") {
    const auto op = operationalize(t, OperationalizationMap::coarse(2));
    CHECK(op.outcome_count == 3);
    CHECK(op.now_retained);
    CHECK(verify_spectral_family(op.observable).passed());
    const std::vector<Proposition> negatives{t.observable.projection("-2"), t.observable.projection("-1")};
    CHECK(op.observable.projection("past") == join_all(negatives));
  }
  SUBCASE("composed coarse grainings agree with the composed map") {
    const auto ints = OperationalizationMap::to_integers(2);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int v = -2; v <= 2; ++v) pairs.emplace_back(std::to_string(v), v < 0 ? "before" : "after");
    const OperationalizationMap halves(RelabelingMap(ints.relabel().target(), {"before", "after"}, pairs));
    const auto staged = function_of(operationalize(t, ints).observable, halves.relabel());
    const auto direct = operationalize(t, compose(halves, ints)).observable;
    CHECK(staged.spectrum() == direct.spectrum());
    for (const auto& sp : direct.family()) CHECK(staged.projection(sp.outcome) == sp.projection);
  }
  SUBCASE("order-reversing relabelings are refused") {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int v = -1; v <= 1; ++v) pairs.emplace_back(time_label(v), v <= 0 ? "late" : "early");
    CHECK(code_of([&] { OperationalizationMap(RelabelingMap(time_labels(1), {"early", "late"}, pairs)); }) ==
          ErrorCode::InvalidArgument);
  }
}

TEST_CASE("accumulated past is increasing") {
  for (int m = 0; m <= 4; ++m) {
    const auto family = accumulated_past(make_time_observable(m));
    CHECK(family.size() == static_cast<std::size_t>(2 * m + 1));
    CHECK(is_increasing(family));
    CHECK(family.back() == Proposition::one(time_window(m)));
  }
}

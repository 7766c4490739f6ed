#include "wqt/emergence.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace wqt {

std::string time_label(int value) {
  if (value == 0) return "now";
  return value > 0 ? "+" + std::to_string(value) : std::to_string(value);
}

int time_value(std::string_view label) {
  if (label == "now") return 0;
  std::string_view digits = label;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || v == 0 || digits.empty()) {
    throw Error(ErrorCode::InvalidArgument, "not a time label: '" + std::string(label) + "'");
  }
  return v;
}

std::vector<std::string> time_labels(int horizon) {
  if (horizon < 0) throw Error(ErrorCode::InvalidArgument, "horizon must be non-negative");
  std::vector<std::string> labels;
  for (int t = -horizon; t <= horizon; ++t) labels.push_back(time_label(t));
  return labels;
}

SpacePtr time_window(int horizon) { return make_space(time_labels(horizon)); }

namespace {

Observable sharp_time(const SpacePtr& window) {
  std::vector<SpectralProjection> family;
  for (StateIndex z = 0; z < window->size(); ++z) {
    const StateIndex member[] = {z};
    family.push_back({window->label(z), Proposition::filter(window, member)});
  }
  return Observable(Map::identity(window), std::move(family));
}

}  // namespace

TimeObservable make_time_observable(const CompositeSystem& composite, std::size_t slot, int horizon, TimeKind kind) {
  const SpacePtr& window = composite.slot(slot);
  if (window->labels() != time_labels(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "slot " + std::to_string(slot + 1) + " is not a time window");
  }
  return {slot, kind, horizon, composite.lift(sharp_time(window), slot)};
}

TimeObservable make_time_observable(int horizon, TimeKind kind) {
  return {0, kind, horizon, sharp_time(time_window(horizon))};
}

SyncPreparation build_sync_state(std::size_t agents, std::vector<int> offsets, int horizon, int band) {
  if (agents < 2) throw Error(ErrorCode::InvalidArgument, "synchronization needs at least two slots");
  if (offsets.size() != agents - 1) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(agents - 1) + " offsets");
  }
  if (horizon < 0 || band < 0) throw Error(ErrorCode::InvalidArgument, "horizon and band must be non-negative");
  for (int d : offsets) {
    if (std::abs(d) > horizon) throw Error(ErrorCode::InvalidArgument, "offset exceeds the horizon");
  }

  const SpacePtr window = time_window(horizon);
  CompositeSystem composite(std::vector<SpacePtr>(agents, window));
  std::vector<StateIndex> members;
  for (StateIndex z = 0; z < composite.space()->size(); ++z) {
    const auto coords = composite.decode(z);
    const int first = static_cast<int>(coords[0]) - horizon;
    bool ok = true;
    for (std::size_t k = 1; k < agents && ok; ++k) {
      const int t = static_cast<int>(coords[k]) - horizon;
      ok = std::abs(t - first - offsets[k - 1]) <= band;
    }
    if (ok) members.push_back(z);
  }
  if (members.empty()) throw Error(ErrorCode::EmptyPreparation, "no tuple satisfies the offsets");
  Proposition prep = Proposition::filter(composite.space(), members);
  return {std::move(composite), std::move(prep), std::move(offsets), horizon, band};
}

CorrelationTable sync_table(const SyncPreparation& prep, const TimeObservable& ti, const TimeObservable& tj) {
  if (ti.slot == tj.slot) throw Error(ErrorCode::SameSlot, "time observables share a slot");
  return possibilistic_correlation(prep.proposition, ti.observable, tj.observable);
}

double sync_score(const SyncPreparation& prep, const TimeObservable& ti, const TimeObservable& tj) {
  return sync_table(prep, ti, tj).score;
}

CommutativityReport verify_time_commutativity(std::span<const TimeObservable> observables) {
  CommutativityReport report;
  auto maps_of = [](const TimeObservable& t) {
    std::vector<const Map*> maps{&t.observable.map()};
    for (const auto& sp : t.observable.family()) maps.push_back(&sp.projection.map());
    return maps;
  };
  for (std::size_t i = 0; i < observables.size(); ++i) {
    for (std::size_t j = i + 1; j < observables.size(); ++j) {
      std::optional<StateIndex> witness;
      for (const Map* a : maps_of(observables[i])) {
        for (const Map* b : maps_of(observables[j])) {
          witness = commutation_witness(*a, *b);
          if (witness) break;
        }
        if (witness) break;
      }
      if (witness) {
        report.all_commute = false;
        report.witnesses.push_back({i, j, *witness});
      }
    }
  }
  return report;
}

OperationalizationMap::OperationalizationMap(RelabelingMap relabel) : relabel_(std::move(relabel)) {
  if (!relabel_.is_order_preserving()) {
    throw Error(ErrorCode::InvalidArgument, "operationalization must preserve the time order");
  }
}

OperationalizationMap OperationalizationMap::to_integers(int horizon) {
  std::vector<std::string> target;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int t = -horizon; t <= horizon; ++t) {
    target.push_back(std::to_string(t));
    pairs.emplace_back(time_label(t), std::to_string(t));
  }
  return OperationalizationMap(RelabelingMap(time_labels(horizon), target, pairs));
}

OperationalizationMap OperationalizationMap::coarse(int horizon) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int t = -horizon; t <= horizon; ++t) {
    pairs.emplace_back(time_label(t), t < 0 ? "past" : (t == 0 ? "now" : "future"));
  }
  return OperationalizationMap(RelabelingMap(time_labels(horizon), {"past", "now", "future"}, pairs));
}

OperationalizationMap compose(const OperationalizationMap& f, const OperationalizationMap& g) {
  return OperationalizationMap(compose(f.relabel(), g.relabel()));
}

OperationalizedTime operationalize(const TimeObservable& t, const OperationalizationMap& f) {
  OperationalizedTime out{function_of(t.observable, f.relabel()), false, f.relabel().is_order_preserving(),
                          f.relabel().is_bijective(), 0};
  out.outcome_count = out.observable.family().size();
  out.now_retained = out.observable.outcome_index("now").has_value();
  return out;
}

std::vector<Proposition> accumulated_past(const TimeObservable& t) {
  std::vector<Proposition> family;
  std::vector<Proposition> prefix;
  for (const auto& sp : t.observable.family()) {
    prefix.push_back(sp.projection);
    family.push_back(join_all(prefix));
  }
  return family;
}

}  // namespace wqt

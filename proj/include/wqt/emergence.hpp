#pragma once

// A-time observables per agent or clock, synchronizing preparations on the
// composite of all time slots, and the operationalization A-time → B-time.

#include <span>
#include <string>
#include <vector>

#include "wqt/composition.hpp"
#include "wqt/core_algebra.hpp"

namespace wqt {

/// Labels of the symmetric window {−m, …, −1, now, +1, …, +m}.
std::vector<std::string> time_labels(int horizon);
std::string time_label(int value);
/// Inverse of time_label; "now" is 0. Throws InvalidArgument.
int time_value(std::string_view label);
SpacePtr time_window(int horizon);

enum class TimeKind { Agent, Clock };

/// Sharp time observable on one slot: identity map with singleton block filters.
struct TimeObservable {
  std::size_t slot = 0;
  TimeKind kind = TimeKind::Agent;
  int horizon = 0;
  Observable observable;
};

/// Time observable of a slot of `composite`, lifted to the product space.
TimeObservable make_time_observable(const CompositeSystem& composite, std::size_t slot, int horizon,
                                    TimeKind kind = TimeKind::Agent);
/// Time observable on a bare window (single slot, no composite).
TimeObservable make_time_observable(int horizon, TimeKind kind = TimeKind::Agent);

struct SyncPreparation {
  CompositeSystem composite;
  Proposition proposition;
  /// δ_2 … δ_K relative to slot 1.
  std::vector<int> offsets;
  int horizon = 0;
  /// Tolerance of the band |t_k − t_1 − δ_k| ≤ band; 0 is exact synchronization.
  int band = 0;
};

/// Filter on the tuples (t, t+δ_2, …, t+δ_K) (within `band`) whose entries all lie in
/// [−m, m]. Throws InvalidArgument for K < 2, a wrong number of offsets or
/// |δ| > m, and EmptyPreparation when no tuple survives.
SyncPreparation build_sync_state(std::size_t agents, std::vector<int> offsets, int horizon, int band = 0);

/// Possibilistic correlation score of the two time observables under the
/// preparation. Throws SameSlot.
CorrelationTable sync_table(const SyncPreparation& prep, const TimeObservable& ti, const TimeObservable& tj);
double sync_score(const SyncPreparation& prep, const TimeObservable& ti, const TimeObservable& tj);

struct CommutationWitness {
  std::size_t first = 0;
  std::size_t second = 0;
  StateIndex state = 0;
};

struct CommutativityReport {
  bool all_commute = true;
  std::vector<CommutationWitness> witnesses;
};

/// Pairwise commutation of the maps and spectral projections of every pair.
CommutativityReport verify_time_commutativity(std::span<const TimeObservable> observables);

/// Order-preserving relabeling of a time spectrum.
class OperationalizationMap {
 public:
  /// Throws InvalidArgument if the relabeling reverses the label order.
  explicit OperationalizationMap(RelabelingMap relabel);

  /// Bijection onto the integers −m … m ("now" becomes "0").
  static OperationalizationMap to_integers(int horizon);
  /// Past / now / future.
  static OperationalizationMap coarse(int horizon);

  const RelabelingMap& relabel() const noexcept { return relabel_; }

 private:
  RelabelingMap relabel_;
};

OperationalizationMap compose(const OperationalizationMap& f, const OperationalizationMap& g);

struct OperationalizedTime {
  Observable observable;
  /// An outcome is still labeled "now".
  bool now_retained = false;
  bool order_preserving = true;
  bool bijective = false;
  std::size_t outcome_count = 0;
};

/// function_of(T, f) plus a record of which A-time qualities survive.
OperationalizedTime operationalize(const TimeObservable& t, const OperationalizationMap& f);

/// P_τ = join of the filters with label ≤ τ, for τ ascending.
std::vector<Proposition> accumulated_past(const TimeObservable& t);

}  // namespace wqt

#pragma once

// Composite systems, epistemic splits, commutants and possibilistic
// entanglement correlations.

#include <string>
#include <utility>
#include <vector>

#include "wqt/core_algebra.hpp"

namespace wqt {

/// Product of component state spaces. Labels are tuples "(a,1)"; lifted maps
/// act on one coordinate and absorb bottom (any coordinate bottom ⇒ bottom).
class CompositeSystem {
 public:
  explicit CompositeSystem(std::vector<SpacePtr> slots);

  std::size_t slot_count() const noexcept { return slots_.size(); }
  const SpacePtr& slot(std::size_t k) const { return slots_.at(k); }
  const SpacePtr& space() const noexcept { return space_; }

  StateIndex encode(std::span<const StateIndex> coords) const;
  std::vector<StateIndex> decode(StateIndex z) const;
  /// Index of the tuple with the given component labels; throws InvalidArgument.
  StateIndex find_tuple(std::span<const std::string> labels) const;

  Map lift(const Map& local, std::size_t slot) const;
  Proposition lift(const Proposition& local, std::size_t slot) const;
  Observable lift(const Observable& local, std::size_t slot) const;
  /// A_1 × A_2 × ... as one map on the product.
  Map lift_product(std::span<const Map> locals) const;

 private:
  std::vector<SpacePtr> slots_;
  std::vector<std::size_t> strides_;
  SpacePtr space_;
};

std::string tuple_label(std::span<const std::string> parts);

CompositeSystem product(const SpacePtr& first, const SpacePtr& second);

/// The observer's subsemigroup and its complementary relation to the rest.
struct SplitReport {
  Semigroup subsemigroup;
  std::size_t ambient_size = 0;
  /// Indices into the ambient semigroup's elements of (inside, outside) pairs with AB != BA.
  std::vector<std::pair<std::size_t, std::size_t>> complementary_pairs;
  /// Ambient indices of inside elements that fail to commute with some outside element:
  /// the inside ∩ (ambient ∖ commutant(outside)).
  std::vector<std::size_t> overlap;
};

/// Throws NotInSemigroup when a generator is not an element of `ambient`.
SplitReport epistemic_split(const Semigroup& ambient, std::span<const Map> generators,
                            std::span<const std::string> names = {});

/// {B ∈ S : BA = AB for all A ∈ M}, in S's element order. Throws NotInSemigroup.
std::vector<Map> commutant(std::span<const Map> subset, const Semigroup& ambient);

/// {z : P(z) = z}.
std::vector<StateIndex> certainty_set(const Proposition& p);

/// Outcome indices α of `observable` whose projection does not annihilate z.
std::vector<std::size_t> possible_outcomes(const Observable& observable, StateIndex z);

struct CorrelationTable {
  std::vector<StateIndex> certainty;
  std::vector<std::string> outcomes1;
  std::vector<std::string> outcomes2;
  /// Sorted (α, β) outcome-index pairs that are jointly possible.
  std::vector<std::pair<std::size_t, std::size_t>> joint;
  std::vector<std::size_t> marginal1;
  std::vector<std::size_t> marginal2;
  /// 1 − |joint| / (|marginal1|·|marginal2|), clamped to [0, 1]. An artifact
  /// convention, not a probabilistic quantity.
  double score = 0.0;
  /// Every possible α admits exactly one β.
  bool l1_determines_l2 = false;
  bool l2_determines_l1 = false;
  bool functional_dependence() const { return l1_determines_l2 && l2_determines_l1; }
};

/// Throws EmptyPreparation when the preparation's certainty set is empty.
CorrelationTable possibilistic_correlation(const Proposition& prep, const Observable& l1, const Observable& l2);

struct NoSignalingResult {
  bool holds = true;
  std::optional<StateIndex> witness;
  std::string outcome;
};

/// For every z in the certainty set: ⋃_β possible(L1, L2_β(z)) = possible(L1, z).
NoSignalingResult check_no_signaling(const Proposition& prep, const Observable& l1, const Observable& l2);

}  // namespace wqt

#pragma once

// Finite models of observable semigroups: states, maps on states, propositions,
// spectral families and the relabeling B = f(A).
//
// A state space Z is extended by an absurd element (bottom) that represents the
// outcome "0" of applying a proposition to a state where it fails. Every map
// fixes bottom. No probabilities appear anywhere in this module.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wqt/errors.hpp"

namespace wqt {

using StateIndex = std::uint32_t;

/// Ordered finite set of distinct state labels plus the bottom element,
/// which is addressed by index size().
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  StateIndex bottom() const noexcept { return static_cast<StateIndex>(labels_.size()); }
  bool is_bottom(StateIndex z) const noexcept { return z == bottom(); }

  /// Label of a state; bottom renders as "bot".
  const std::string& label(StateIndex z) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<StateIndex> find(std::string_view label) const;
  /// Throws InvalidArgument for unknown labels.
  StateIndex index_of(std::string_view label) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, StateIndex> index_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

SpacePtr make_space(std::vector<std::string> labels);

bool same_space(const SpacePtr& a, const SpacePtr& b);

/// Total map on Z ∪ {bottom} with bottom ↦ bottom. This is the element type of
/// the observable semigroup.
class Map {
 public:
  /// `image[z]` for every label index z; entries may be bottom.
  Map(SpacePtr space, std::vector<StateIndex> image);

  static Map identity(SpacePtr space);
  static Map zero(SpacePtr space);
  static Map constant(SpacePtr space, StateIndex target);
  /// Identity on `members`, bottom elsewhere.
  static Map filter(SpacePtr space, std::span<const StateIndex> members);

  StateIndex operator()(StateIndex z) const {
    return z >= image_.size() ? space_->bottom() : image_[z];
  }

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return image_.size(); }
  std::span<const StateIndex> image() const noexcept { return image_; }

  /// Returns a copy with one entry replaced.
  Map with_entry(StateIndex z, StateIndex target) const;

  bool is_idempotent() const;
  /// Idempotent map whose non-bottom images are all fixed points with z ↦ z or bottom.
  bool is_filter() const;
  bool is_identity() const;
  bool is_zero() const;

  /// States z with map(z) != bottom.
  std::vector<StateIndex> support() const;
  /// States z with map(z) == z.
  std::vector<StateIndex> fixed_points() const;

  /// "a->b|c->bot" rendering in declaration order.
  std::string to_string() const;

  friend bool operator==(const Map& a, const Map& b) {
    return a.image_ == b.image_ && same_space(a.space_, b.space_);
  }

  std::size_t hash() const noexcept;

 private:
  SpacePtr space_;
  std::vector<StateIndex> image_;
};

struct MapHash {
  std::size_t operator()(const Map& m) const noexcept { return m.hash(); }
};

/// (a ∘ b)(z) = a(b(z)): "a applied after b". Throws SpaceMismatch.
Map compose(const Map& a, const Map& b);
inline Map operator*(const Map& a, const Map& b) { return compose(a, b); }

bool commutes(const Map& a, const Map& b);
/// First state on which ab and ba differ.
std::optional<StateIndex> commutation_witness(const Map& a, const Map& b);

/// An idempotent map; spectrum ⊆ {yes, no}.
class Proposition {
 public:
  /// Throws NotIdempotent.
  static Proposition from_map(Map map);
  static Proposition filter(SpacePtr space, std::span<const StateIndex> members);
  static Proposition one(SpacePtr space);
  static Proposition zero(SpacePtr space);

  const Map& map() const noexcept { return map_; }
  operator const Map&() const noexcept { return map_; }  // NOLINT(google-explicit-constructor)
  const SpacePtr& space() const noexcept { return map_.space(); }
  StateIndex operator()(StateIndex z) const { return map_(z); }

  /// States on which the proposition is true with certainty (fixed points).
  std::vector<StateIndex> certainty_set() const { return map_.fixed_points(); }
  std::vector<StateIndex> support() const { return map_.support(); }
  bool is_filter() const { return map_.is_filter(); }

  friend bool operator==(const Proposition& a, const Proposition& b) { return a.map_ == b.map_; }

 private:
  explicit Proposition(Map map) : map_(std::move(map)) {}
  Map map_;
};

enum class LogicOp { Negate, Meet, Join };

/// Filter on the complement of supp(p). Compatible with p and p·negate(p) = 0.
Proposition negate(const Proposition& p);
/// p ∧ q = pq. Throws Incompatible when p and q do not commute.
Proposition meet(const Proposition& p, const Proposition& q);
/// p ∨ q = negate(negate(p) ∧ negate(q)). Throws Incompatible.
Proposition join(const Proposition& p, const Proposition& q);
/// Entry point mirroring the three logic operations; `q` is required for meet and join.
Proposition proposition_logic(LogicOp op, const Proposition& p, const Proposition* q = nullptr);

/// Join of a family via negation: the filter on the union of supports. Does not
/// require pairwise compatibility. A single element joins to itself; an empty
/// family throws InvalidArgument since it carries no state space.
Proposition join_all(std::span<const Proposition> family);

struct SpectralProjection {
  std::string outcome;
  Proposition projection;
};

/// Map plus an (optional) spectral family {α ↦ A_α}. Construction does not
/// validate the spectral laws; use verify_spectral_family.
class Observable {
 public:
  Observable(Map map, std::vector<SpectralProjection> family);

  /// Block filters over a partition of Z; validates the partition and that the
  /// map is block preserving. Missing map means identity.
  static Observable from_blocks(SpacePtr space,
                                const std::vector<std::pair<std::string, std::vector<StateIndex>>>& blocks,
                                std::optional<Map> map = std::nullopt);
  /// The yes/no observable of a proposition: yes ↦ p, no ↦ negate(p).
  static Observable from_proposition(const Proposition& p);

  const Map& map() const noexcept { return map_; }
  const SpacePtr& space() const noexcept { return map_.space(); }
  const std::vector<SpectralProjection>& family() const noexcept { return family_; }
  std::vector<std::string> spectrum() const;
  std::optional<std::size_t> outcome_index(std::string_view outcome) const;
  /// Throws InvalidArgument for unknown outcomes.
  const Proposition& projection(std::string_view outcome) const;

  Observable with_map(Map map) const { return Observable(std::move(map), family_); }

 private:
  Map map_;
  std::vector<SpectralProjection> family_;
};

struct LawCheck {
  std::string law;
  bool passed = true;
  std::optional<StateIndex> witness;
  std::string detail;
};

struct SpectralReport {
  std::vector<LawCheck> laws;
  bool passed() const;
  const LawCheck* find(std::string_view law) const;
};

/// Checks A_αA_β = A_βA_α = 0 (α≠β), AA_α = A_αA and ⋁A_α = 1, with a witness
/// state for each failure.
SpectralReport verify_spectral_family(const Observable& a);

/// Total function between two ordered outcome sets.
class RelabelingMap {
 public:
  /// `pairs` maps source labels to target labels. Throws PartialMap when a
  /// source label is unmapped and InvalidArgument for unknown labels.
  RelabelingMap(std::vector<std::string> source, std::vector<std::string> target,
                const std::vector<std::pair<std::string, std::string>>& pairs);

  const std::vector<std::string>& source() const noexcept { return source_; }
  const std::vector<std::string>& target() const noexcept { return target_; }
  const std::string& operator()(std::string_view source_label) const;
  /// Index into target() for a source index.
  std::size_t image_index(std::size_t source_index) const { return image_[source_index]; }
  bool is_bijective() const;
  /// Non-decreasing target position along source order.
  bool is_order_preserving() const;

 private:
  std::vector<std::string> source_;
  std::vector<std::string> target_;
  std::vector<std::size_t> image_;
};

/// f ∘ g (apply g first). Throws InvalidArgument if g's target is not f's source.
RelabelingMap compose(const RelabelingMap& f, const RelabelingMap& g);

/// B = f(A): spectrum = image of f in target order, B_β = ⋁_{f(α)=β} A_α, map of A.
/// Throws InvalidObservable if A fails its spectral laws, PartialMap if f misses
/// an outcome of A.
Observable function_of(const Observable& a, const RelabelingMap& f);

/// Composition-closed set containing generators, 1 and 0. `words[i]` names how
/// elements[i] was first reached.
struct Semigroup {
  std::vector<Map> elements;
  std::vector<Map> generators;
  std::vector<std::string> words;

  std::size_t size() const noexcept { return elements.size(); }
  std::optional<std::size_t> index_of(const Map& m) const;
  bool contains(const Map& m) const { return index_of(m).has_value(); }
};

inline constexpr std::size_t kDefaultClosureLimit = 1'000'000;

/// Least composition-closed superset of `generators` ∪ {1, 0}. Element order is
/// deterministic: 1, 0, generators, then products in breadth-first order.
/// `space` is needed when `generators` is empty.
Semigroup closure(SpacePtr space, std::span<const Map> generators,
                  std::span<const std::string> names = {},
                  std::size_t limit = kDefaultClosureLimit);

/// P_τP_σ = P_σP_τ = P_σ for every σ ≤ τ (list order).
bool is_increasing(std::span<const Proposition> family);

}  // namespace wqt

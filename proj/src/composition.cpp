#include "wqt/composition.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>

namespace wqt {

std::string tuple_label(std::span<const std::string> parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

CompositeSystem::CompositeSystem(std::vector<SpacePtr> slots) : slots_(std::move(slots)) {
  if (slots_.empty()) throw Error(ErrorCode::InvalidArgument, "composite needs at least one component");
  // Last slot varies fastest so labels come out in lexicographic declaration order.
  strides_.assign(slots_.size(), 1);
  for (std::size_t k = slots_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * slots_[k]->size();
  const std::size_t total = strides_[0] * slots_[0]->size();

  std::vector<std::string> labels;
  labels.reserve(total);
  std::vector<std::string> parts(slots_.size());
  for (std::size_t z = 0; z < total; ++z) {
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      parts[k] = slots_[k]->label(static_cast<StateIndex>((z / strides_[k]) % slots_[k]->size()));
    }
    labels.push_back(tuple_label(parts));
  }
  space_ = make_space(std::move(labels));
}

StateIndex CompositeSystem::encode(std::span<const StateIndex> coords) const {
  std::size_t z = 0;
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (coords[k] >= slots_[k]->size()) return space_->bottom();
    z += coords[k] * strides_[k];
  }
  return static_cast<StateIndex>(z);
}

std::vector<StateIndex> CompositeSystem::decode(StateIndex z) const {
  std::vector<StateIndex> coords(slots_.size());
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    coords[k] = static_cast<StateIndex>((z / strides_[k]) % slots_[k]->size());
  }
  return coords;
}

StateIndex CompositeSystem::find_tuple(std::span<const std::string> labels) const {
  if (labels.size() != slots_.size()) {
    throw Error(ErrorCode::InvalidArgument, "tuple " + tuple_label(labels) + " has the wrong arity");
  }
  std::vector<StateIndex> coords(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) coords[k] = slots_[k]->index_of(labels[k]);
  return encode(coords);
}

Map CompositeSystem::lift(const Map& local, std::size_t slot) const {
  if (!same_space(local.space(), slots_.at(slot))) {
    throw Error(ErrorCode::SpaceMismatch, "map does not act on slot " + std::to_string(slot + 1));
  }
  std::vector<StateIndex> image(space_->size());
  for (std::size_t z = 0; z < image.size(); ++z) {
    auto coords = decode(static_cast<StateIndex>(z));
    coords[slot] = local(coords[slot]);
    image[z] = encode(coords);
  }
  return Map(space_, std::move(image));
}

Proposition CompositeSystem::lift(const Proposition& local, std::size_t slot) const {
  return Proposition::from_map(lift(local.map(), slot));
}

Observable CompositeSystem::lift(const Observable& local, std::size_t slot) const {
  std::vector<SpectralProjection> family;
  for (const auto& sp : local.family()) family.push_back({sp.outcome, lift(sp.projection, slot)});
  return Observable(lift(local.map(), slot), std::move(family));
}

Map CompositeSystem::lift_product(std::span<const Map> locals) const {
  if (locals.size() != slots_.size()) throw Error(ErrorCode::InvalidArgument, "one local map per slot required");
  Map acc = Map::identity(space_);
  for (std::size_t k = 0; k < locals.size(); ++k) acc = compose(lift(locals[k], k), acc);
  return acc;
}

CompositeSystem product(const SpacePtr& first, const SpacePtr& second) {
  return CompositeSystem({first, second});
}

// ---------------------------------------------------------------------------

SplitReport epistemic_split(const Semigroup& ambient, std::span<const Map> generators,
                            std::span<const std::string> names) {
  for (const Map& g : generators) {
    if (!ambient.contains(g)) throw Error(ErrorCode::NotInSemigroup, "generator is not in the ambient semigroup");
  }
  SplitReport report;
  report.ambient_size = ambient.size();
  SpacePtr space = ambient.elements.empty() ? nullptr : ambient.elements.front().space();
  report.subsemigroup = closure(space, generators, names);

  std::vector<bool> inside(ambient.size(), false);
  for (std::size_t i = 0; i < ambient.size(); ++i) inside[i] = report.subsemigroup.contains(ambient.elements[i]);

  for (std::size_t i = 0; i < ambient.size(); ++i) {
    if (!inside[i]) continue;
    bool overlaps = false;
    for (std::size_t j = 0; j < ambient.size(); ++j) {
      if (inside[j]) continue;
      if (!commutes(ambient.elements[i], ambient.elements[j])) {
        report.complementary_pairs.emplace_back(i, j);
        overlaps = true;
      }
    }
    if (overlaps) report.overlap.push_back(i);
  }
  return report;
}

std::vector<Map> commutant(std::span<const Map> subset, const Semigroup& ambient) {
  for (const Map& m : subset) {
    if (!ambient.contains(m)) throw Error(ErrorCode::NotInSemigroup, "subset element is not in the semigroup");
  }
  std::vector<Map> out;
  for (const Map& b : ambient.elements) {
    const bool all = std::all_of(subset.begin(), subset.end(), [&](const Map& a) { return commutes(a, b); });
    if (all) out.push_back(b);
  }
  return out;
}

std::vector<StateIndex> certainty_set(const Proposition& p) { return p.certainty_set(); }

std::vector<std::size_t> possible_outcomes(const Observable& observable, StateIndex z) {
  std::vector<std::size_t> out;
  const auto& space = observable.space();
  if (space->is_bottom(z)) return out;
  for (std::size_t i = 0; i < observable.family().size(); ++i) {
    if (observable.family()[i].projection(z) != space->bottom()) out.push_back(i);
  }
  return out;
}

CorrelationTable possibilistic_correlation(const Proposition& prep, const Observable& l1, const Observable& l2) {
  if (!same_space(prep.space(), l1.space()) || !same_space(prep.space(), l2.space())) {
    throw Error(ErrorCode::SpaceMismatch, "preparation and local observables act on different spaces");
  }
  CorrelationTable table;
  table.certainty = certainty_set(prep);
  if (table.certainty.empty()) throw Error(ErrorCode::EmptyPreparation, "preparation is never true");
  table.outcomes1 = l1.spectrum();
  table.outcomes2 = l2.spectrum();

  std::set<std::pair<std::size_t, std::size_t>> joint;
  for (StateIndex z : table.certainty) {
    const auto a = possible_outcomes(l1, z);
    const auto b = possible_outcomes(l2, z);
    for (std::size_t x : a) {
      for (std::size_t y : b) joint.emplace(x, y);
    }
  }
  table.joint.assign(joint.begin(), joint.end());
  std::set<std::size_t> m1, m2;
  for (const auto& [x, y] : table.joint) {
    m1.insert(x);
    m2.insert(y);
  }
  table.marginal1.assign(m1.begin(), m1.end());
  table.marginal2.assign(m2.begin(), m2.end());

  const double full = static_cast<double>(m1.size() * m2.size());
  table.score = full == 0.0 ? 0.0 : std::clamp(1.0 - static_cast<double>(joint.size()) / full, 0.0, 1.0);

  auto determines = [&](bool first) {
    std::map<std::size_t, std::size_t> partners;
    for (const auto& [x, y] : table.joint) ++partners[first ? x : y];
    return !partners.empty() &&
           std::all_of(partners.begin(), partners.end(), [](const auto& kv) { return kv.second == 1; });
  };
  table.l1_determines_l2 = determines(true);
  table.l2_determines_l1 = determines(false);
  return table;
}

NoSignalingResult check_no_signaling(const Proposition& prep, const Observable& l1, const Observable& l2) {
  NoSignalingResult result;
  for (StateIndex z : certainty_set(prep)) {
    const auto local = possible_outcomes(l1, z);
    std::set<std::size_t> after;
    for (const auto& sp : l2.family()) {
      for (std::size_t a : possible_outcomes(l1, sp.projection(z))) after.insert(a);
    }
    const std::set<std::size_t> before(local.begin(), local.end());
    if (after != before) {
      result.holds = false;
      result.witness = z;
      std::vector<std::size_t> diff;
      std::set_symmetric_difference(before.begin(), before.end(), after.begin(), after.end(),
                                    std::back_inserter(diff));
      result.outcome = l1.family()[diff.front()].outcome;
      return result;
    }
  }
  return result;
}

}  // namespace wqt

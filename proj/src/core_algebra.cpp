#include "wqt/core_algebra.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_set>

namespace wqt {

namespace {

const std::string kBottomLabel = "bot";

void require_same_space(const Map& a, const Map& b) {
  if (!same_space(a.space(), b.space())) {
    throw Error(ErrorCode::SpaceMismatch, "maps act on different state spaces");
  }
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(ErrorCode::InvalidModel, "state space must not be empty");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == kBottomLabel) throw Error(ErrorCode::InvalidModel, "'bot' is reserved for the absurd state");
    if (!index_.emplace(labels_[i], static_cast<StateIndex>(i)).second) {
      throw Error(ErrorCode::InvalidModel, "duplicate state label '" + labels_[i] + "'");
    }
  }
}

const std::string& StateSpace::label(StateIndex z) const {
  return z < labels_.size() ? labels_[z] : kBottomLabel;
}

std::optional<StateIndex> StateSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateIndex StateSpace::index_of(std::string_view label) const {
  if (auto z = find(label)) return *z;
  throw Error(ErrorCode::InvalidArgument, "unknown state '" + std::string(label) + "'");
}

SpacePtr make_space(std::vector<std::string> labels) {
  return std::make_shared<const StateSpace>(std::move(labels));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------

Map::Map(SpacePtr space, std::vector<StateIndex> image) : space_(std::move(space)), image_(std::move(image)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "map without state space");
  if (image_.size() != space_->size()) {
    throw Error(ErrorCode::InvalidArgument, "map must assign an image to every state");
  }
  for (StateIndex t : image_) {
    if (t > space_->bottom()) throw Error(ErrorCode::InvalidArgument, "map image outside the state space");
  }
}

Map Map::identity(SpacePtr space) {
  std::vector<StateIndex> image(space->size());
  for (std::size_t z = 0; z < image.size(); ++z) image[z] = static_cast<StateIndex>(z);
  return Map(std::move(space), std::move(image));
}

Map Map::zero(SpacePtr space) {
  std::vector<StateIndex> image(space->size(), space->bottom());
  return Map(std::move(space), std::move(image));
}

Map Map::constant(SpacePtr space, StateIndex target) {
  std::vector<StateIndex> image(space->size(), target);
  return Map(std::move(space), std::move(image));
}

Map Map::filter(SpacePtr space, std::span<const StateIndex> members) {
  std::vector<StateIndex> image(space->size(), space->bottom());
  for (StateIndex z : members) {
    if (z >= image.size()) throw Error(ErrorCode::InvalidArgument, "filter member outside the state space");
    image[z] = z;
  }
  return Map(std::move(space), std::move(image));
}

Map Map::with_entry(StateIndex z, StateIndex target) const {
  auto image = image_;
  image.at(z) = target;
  return Map(space_, std::move(image));
}

bool Map::is_idempotent() const {
  for (StateIndex t : image_) {
    if ((*this)(t) != t) return false;
  }
  return true;
}

bool Map::is_filter() const {
  for (std::size_t z = 0; z < image_.size(); ++z) {
    if (image_[z] != z && image_[z] != space_->bottom()) return false;
  }
  return true;
}

bool Map::is_identity() const {
  for (std::size_t z = 0; z < image_.size(); ++z) {
    if (image_[z] != z) return false;
  }
  return true;
}

bool Map::is_zero() const {
  return std::all_of(image_.begin(), image_.end(), [&](StateIndex t) { return t == space_->bottom(); });
}

std::vector<StateIndex> Map::support() const {
  std::vector<StateIndex> out;
  for (std::size_t z = 0; z < image_.size(); ++z) {
    if (image_[z] != space_->bottom()) out.push_back(static_cast<StateIndex>(z));
  }
  return out;
}

std::vector<StateIndex> Map::fixed_points() const {
  std::vector<StateIndex> out;
  for (std::size_t z = 0; z < image_.size(); ++z) {
    if (image_[z] == z) out.push_back(static_cast<StateIndex>(z));
  }
  return out;
}

std::string Map::to_string() const {
  std::string out;
  for (std::size_t z = 0; z < image_.size(); ++z) {
    if (z) out += '|';
    out += space_->label(static_cast<StateIndex>(z));
    out += "->";
    out += space_->label(image_[z]);
  }
  return out;
}

std::size_t Map::hash() const noexcept {
  std::size_t h = image_.size();
  for (StateIndex t : image_) h = h * 1000003u ^ t;
  return h;
}

Map compose(const Map& a, const Map& b) {
  require_same_space(a, b);
  std::vector<StateIndex> image(a.size());
  for (std::size_t z = 0; z < image.size(); ++z) image[z] = a(b(static_cast<StateIndex>(z)));
  return Map(a.space(), std::move(image));
}

std::optional<StateIndex> commutation_witness(const Map& a, const Map& b) {
  require_same_space(a, b);
  for (std::size_t z = 0; z < a.size(); ++z) {
    const auto s = static_cast<StateIndex>(z);
    if (a(b(s)) != b(a(s))) return s;
  }
  return std::nullopt;
}

bool commutes(const Map& a, const Map& b) { return !commutation_witness(a, b).has_value(); }

// ---------------------------------------------------------------------------

Proposition Proposition::from_map(Map map) {
  if (!map.is_idempotent()) throw Error(ErrorCode::NotIdempotent, "map " + map.to_string() + " is not idempotent");
  return Proposition(std::move(map));
}

Proposition Proposition::filter(SpacePtr space, std::span<const StateIndex> members) {
  return Proposition(Map::filter(std::move(space), members));
}

Proposition Proposition::one(SpacePtr space) { return Proposition(Map::identity(std::move(space))); }

Proposition Proposition::zero(SpacePtr space) { return Proposition(Map::zero(std::move(space))); }

Proposition negate(const Proposition& p) {
  const Map& m = p.map();
  std::vector<StateIndex> outside;
  for (std::size_t z = 0; z < m.size(); ++z) {
    if (m(static_cast<StateIndex>(z)) == m.space()->bottom()) outside.push_back(static_cast<StateIndex>(z));
  }
  return Proposition::filter(m.space(), outside);
}

namespace {

void require_compatible(const Proposition& p, const Proposition& q) {
  if (auto w = commutation_witness(p, q)) {
    throw Error(ErrorCode::Incompatible,
                "propositions do not commute (witness state '" + p.space()->label(*w) + "')");
  }
}

}  // namespace

Proposition meet(const Proposition& p, const Proposition& q) {
  require_compatible(p, q);
  return Proposition::from_map(compose(p.map(), q.map()));
}

Proposition join(const Proposition& p, const Proposition& q) {
  require_compatible(p, q);
  return negate(meet(negate(p), negate(q)));
}

Proposition proposition_logic(LogicOp op, const Proposition& p, const Proposition* q) {
  if (op == LogicOp::Negate) return negate(p);
  if (q == nullptr) throw Error(ErrorCode::InvalidArgument, "binary proposition operation needs two operands");
  return op == LogicOp::Meet ? meet(p, *q) : join(p, *q);
}

Proposition join_all(std::span<const Proposition> family) {
  if (family.empty()) throw Error(ErrorCode::InvalidArgument, "join of an empty family needs a state space");
  if (family.size() == 1) return family.front();
  Map acc = negate(family.front()).map();
  for (std::size_t i = 1; i < family.size(); ++i) {
    // Negations are filters and always commute.
    acc = compose(acc, negate(family[i]).map());
  }
  return negate(Proposition::from_map(std::move(acc)));
}

// ---------------------------------------------------------------------------

Observable::Observable(Map map, std::vector<SpectralProjection> family)
    : map_(std::move(map)), family_(std::move(family)) {
  for (std::size_t i = 0; i < family_.size(); ++i) {
    if (!same_space(family_[i].projection.space(), map_.space())) {
      throw Error(ErrorCode::SpaceMismatch, "spectral projection '" + family_[i].outcome + "' on another space");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (family_[j].outcome == family_[i].outcome) {
        throw Error(ErrorCode::InvalidObservable, "duplicate outcome '" + family_[i].outcome + "'");
      }
    }
  }
}

Observable Observable::from_blocks(SpacePtr space,
                                   const std::vector<std::pair<std::string, std::vector<StateIndex>>>& blocks,
                                   std::optional<Map> map) {
  std::vector<int> owner(space->size(), -1);
  std::vector<SpectralProjection> family;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (StateIndex z : blocks[b].second) {
      if (z >= space->size()) throw Error(ErrorCode::InvalidObservable, "block member outside the state space");
      if (owner[z] != -1) {
        throw Error(ErrorCode::InvalidObservable, "state '" + space->label(z) + "' appears in two blocks");
      }
      owner[z] = static_cast<int>(b);
    }
    family.push_back({blocks[b].first, Proposition::filter(space, blocks[b].second)});
  }
  for (std::size_t z = 0; z < owner.size(); ++z) {
    if (owner[z] == -1) {
      throw Error(ErrorCode::InvalidObservable,
                  "state '" + space->label(static_cast<StateIndex>(z)) + "' is in no block");
    }
  }
  Map m = map ? std::move(*map) : Map::identity(space);
  for (std::size_t z = 0; z < owner.size(); ++z) {
    const StateIndex t = m(static_cast<StateIndex>(z));
    if (t != space->bottom() && owner[t] != owner[z]) {
      throw Error(ErrorCode::InvalidObservable,
                  "map sends '" + space->label(static_cast<StateIndex>(z)) + "' across blocks");
    }
  }
  return Observable(std::move(m), std::move(family));
}

Observable Observable::from_proposition(const Proposition& p) {
  return Observable(p.map(), {{"yes", p}, {"no", negate(p)}});
}

std::vector<std::string> Observable::spectrum() const {
  std::vector<std::string> out;
  out.reserve(family_.size());
  for (const auto& sp : family_) out.push_back(sp.outcome);
  return out;
}

std::optional<std::size_t> Observable::outcome_index(std::string_view outcome) const {
  for (std::size_t i = 0; i < family_.size(); ++i) {
    if (family_[i].outcome == outcome) return i;
  }
  return std::nullopt;
}

const Proposition& Observable::projection(std::string_view outcome) const {
  if (auto i = outcome_index(outcome)) return family_[*i].projection;
  throw Error(ErrorCode::InvalidArgument, "unknown outcome '" + std::string(outcome) + "'");
}

bool SpectralReport::passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCheck& l) { return l.passed; });
}

const LawCheck* SpectralReport::find(std::string_view law) const {
  for (const auto& l : laws) {
    if (l.law == law) return &l;
  }
  return nullptr;
}

SpectralReport verify_spectral_family(const Observable& a) {
  const auto& family = a.family();
  const auto& space = a.space();
  SpectralReport report;

  LawCheck orth{"orthogonality", true, std::nullopt, ""};
  for (std::size_t i = 0; i < family.size() && orth.passed; ++i) {
    for (std::size_t j = 0; j < family.size() && orth.passed; ++j) {
      if (i == j) continue;
      const Map prod = compose(family[i].projection.map(), family[j].projection.map());
      for (std::size_t z = 0; z < prod.size(); ++z) {
        if (prod(static_cast<StateIndex>(z)) != space->bottom()) {
          orth = {"orthogonality", false, static_cast<StateIndex>(z),
                  family[i].outcome + "*" + family[j].outcome + " != 0"};
          break;
        }
      }
    }
  }
  report.laws.push_back(orth);

  LawCheck comm{"commutation", true, std::nullopt, ""};
  for (const auto& sp : family) {
    if (auto w = commutation_witness(a.map(), sp.projection.map())) {
      comm = {"commutation", false, *w, "A*A_" + sp.outcome + " != A_" + sp.outcome + "*A"};
      break;
    }
  }
  report.laws.push_back(comm);

  LawCheck complete{"completeness", true, std::nullopt, ""};
  std::vector<bool> covered(space->size(), false);
  for (const auto& sp : family) {
    for (StateIndex z : sp.projection.support()) covered[z] = true;
  }
  for (std::size_t z = 0; z < covered.size(); ++z) {
    if (!covered[z]) {
      complete = {"completeness", false, static_cast<StateIndex>(z), "join of spectral projections != 1"};
      break;
    }
  }
  report.laws.push_back(complete);
  return report;
}

// ---------------------------------------------------------------------------

RelabelingMap::RelabelingMap(std::vector<std::string> source, std::vector<std::string> target,
                             const std::vector<std::pair<std::string, std::string>>& pairs)
    : source_(std::move(source)), target_(std::move(target)), image_(source_.size(), target_.size()) {
  auto position = [](const std::vector<std::string>& v, const std::string& s) -> std::optional<std::size_t> {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  };
  for (const auto& [from, to] : pairs) {
    auto s = position(source_, from);
    if (!s) throw Error(ErrorCode::InvalidArgument, "relabeling source '" + from + "' is not in the spectrum");
    auto t = position(target_, to);
    if (!t) throw Error(ErrorCode::InvalidArgument, "relabeling target '" + to + "' is not declared");
    if (image_[*s] != target_.size() && image_[*s] != *t) {
      throw Error(ErrorCode::InvalidArgument, "relabeling assigns two targets to '" + from + "'");
    }
    image_[*s] = *t;
  }
  for (std::size_t i = 0; i < source_.size(); ++i) {
    if (image_[i] == target_.size()) throw Error(ErrorCode::PartialMap, "no image for outcome '" + source_[i] + "'");
  }
}

const std::string& RelabelingMap::operator()(std::string_view source_label) const {
  for (std::size_t i = 0; i < source_.size(); ++i) {
    if (source_[i] == source_label) return target_[image_[i]];
  }
  throw Error(ErrorCode::PartialMap, "no image for outcome '" + std::string(source_label) + "'");
}

bool RelabelingMap::is_bijective() const {
  if (source_.size() != target_.size()) return false;
  std::vector<bool> hit(target_.size(), false);
  for (std::size_t t : image_) {
    if (hit[t]) return false;
    hit[t] = true;
  }
  return true;
}

bool RelabelingMap::is_order_preserving() const {
  return std::is_sorted(image_.begin(), image_.end());
}

RelabelingMap compose(const RelabelingMap& f, const RelabelingMap& g) {
  if (g.target() != f.source()) throw Error(ErrorCode::InvalidArgument, "relabelings do not chain");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < g.source().size(); ++i) {
    pairs.emplace_back(g.source()[i], f.target()[f.image_index(g.image_index(i))]);
  }
  return RelabelingMap(g.source(), f.target(), pairs);
}

Observable function_of(const Observable& a, const RelabelingMap& f) {
  const SpectralReport report = verify_spectral_family(a);
  for (const auto& law : report.laws) {
    if (!law.passed) throw Error(ErrorCode::InvalidObservable, "observable fails " + law.law + ": " + law.detail);
  }
  std::vector<std::size_t> source_of(a.family().size());
  for (std::size_t i = 0; i < a.family().size(); ++i) {
    auto it = std::find(f.source().begin(), f.source().end(), a.family()[i].outcome);
    if (it == f.source().end()) {
      throw Error(ErrorCode::PartialMap, "no image for outcome '" + a.family()[i].outcome + "'");
    }
    source_of[i] = static_cast<std::size_t>(it - f.source().begin());
  }
  std::vector<SpectralProjection> family;
  for (std::size_t t = 0; t < f.target().size(); ++t) {
    std::vector<Proposition> preimage;
    for (std::size_t i = 0; i < a.family().size(); ++i) {
      if (f.image_index(source_of[i]) == t) preimage.push_back(a.family()[i].projection);
    }
    if (!preimage.empty()) family.push_back({f.target()[t], join_all(preimage)});
  }
  return Observable(a.map(), std::move(family));
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> Semigroup::index_of(const Map& m) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] == m) return i;
  }
  return std::nullopt;
}

Semigroup closure(SpacePtr space, std::span<const Map> generators, std::span<const std::string> names,
                  std::size_t limit) {
  if (!generators.empty()) space = generators.front().space();
  if (!space) throw Error(ErrorCode::InvalidArgument, "closure needs a state space");
  for (const Map& g : generators) {
    if (!same_space(g.space(), space)) throw Error(ErrorCode::SpaceMismatch, "generators act on different spaces");
  }

  Semigroup s;
  s.generators.assign(generators.begin(), generators.end());
  std::unordered_set<Map, MapHash> seen;
  std::deque<std::size_t> queue;
  auto add = [&](Map m, std::string word) {
    if (!seen.insert(m).second) return;
    if (s.elements.size() >= limit) throw Error(ErrorCode::LimitExceeded, "semigroup closure exceeds limit");
    s.elements.push_back(std::move(m));
    s.words.push_back(std::move(word));
    queue.push_back(s.elements.size() - 1);
  };

  std::vector<std::string> gen_names;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    gen_names.push_back(i < names.size() ? names[i] : "g" + std::to_string(i));
  }
  add(Map::identity(space), "1");
  add(Map::zero(space), "0");
  for (std::size_t i = 0; i < generators.size(); ++i) add(generators[i], gen_names[i]);

  // Every word g1 g2 ... gk is g1 ∘ (g2 ... gk), so left multiplication by
  // generators reaches the whole semigroup.
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < generators.size(); ++g) {
      Map product = compose(generators[g], s.elements[idx]);
      if (!seen.count(product)) add(std::move(product), gen_names[g] + "*" + s.words[idx]);
    }
  }
  return s;
}

bool is_increasing(std::span<const Proposition> family) {
  for (std::size_t sigma = 0; sigma < family.size(); ++sigma) {
    for (std::size_t tau = sigma; tau < family.size(); ++tau) {
      const Map& ps = family[sigma].map();
      const Map& pt = family[tau].map();
      if (!(compose(pt, ps) == ps) || !(compose(ps, pt) == ps)) return false;
    }
  }
  return true;
}

}  // namespace wqt

#include "wqt/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "wqt/composition.hpp"
#include "wqt/emergence.hpp"
#include "wqt/matter.hpp"
#include "wqt/report.hpp"
#include "wqt/toy_wdw.hpp"

namespace wqt::cli {
namespace {

constexpr std::size_t kCheckClosureLimit = 200'000;
constexpr std::size_t kExhaustiveAssociativity = 64;
constexpr std::size_t kSampledTriples = 20'000;
constexpr std::uint32_t kCheckSeed = 20240607;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join_labels(const std::vector<std::string>& labels, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += sep;
    out += labels[i];
  }
  return out;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Check suites

class CheckWriter {
 public:
  CheckWriter() { csv_.row({"scope", "subject", "law", "result", "witness"}); }

  void pass(std::string_view scope, std::string_view subject, std::string_view law) {
    csv_.row({scope, subject, law, "pass", ""});
  }
  void fail(std::string_view scope, std::string_view subject, std::string_view law, std::string_view witness) {
    ++failures_;
    csv_.row({scope, subject, law, "fail", witness});
  }
  void result(std::string_view scope, std::string_view subject, std::string_view law, bool ok,
              std::string_view witness) {
    ok ? pass(scope, subject, law) : fail(scope, subject, law, witness);
  }
  void skip(std::string_view scope, std::string_view subject, std::string_view law, std::string_view why) {
    csv_.row({scope, subject, law, "skip", why});
  }

  std::size_t failures() const { return failures_; }
  const std::string& str() const { return csv_.str(); }

 private:
  CsvReport csv_;
  std::size_t failures_ = 0;
};

std::string state_witness(const SpacePtr& space, std::optional<StateIndex> z) {
  return z ? space->label(*z) : std::string();
}

void check_observable(CheckWriter& w, const std::string& scope, const std::string& name, const Observable& o) {
  for (const auto& law : verify_spectral_family(o).laws) {
    std::string witness = state_witness(o.space(), law.witness);
    if (!law.passed && !law.detail.empty()) witness += witness.empty() ? law.detail : " " + law.detail;
    w.result(scope, name, law.law, law.passed, witness);
  }
}

/// PP = P, P·¬P = ¬P·P = 0 and, for filters, ¬¬P = P.
void check_proposition(CheckWriter& w, const std::string& scope, const std::string& name, const Map& p) {
  std::optional<StateIndex> bad;
  for (StateIndex z = 0; z < p.size() && !bad; ++z) {
    if (p(p(z)) != p(z)) bad = z;
  }
  w.result(scope, name, "idempotence", !bad, state_witness(p.space(), bad));
  if (bad) {
    w.skip(scope, name, "complement", "not idempotent");
    return;
  }
  const Proposition prop = Proposition::from_map(p);
  const Map neg = negate(prop).map();
  const Map left = p * neg;
  const Map right = neg * p;
  for (StateIndex z = 0; z < p.size() && !bad; ++z) {
    if (!p.space()->is_bottom(left(z)) || !p.space()->is_bottom(right(z))) bad = z;
  }
  w.result(scope, name, "complement", !bad, state_witness(p.space(), bad));
  if (prop.is_filter()) {
    w.result(scope, name, "double_negation", negate(negate(prop)) == prop, "");
  }
}

/// De Morgan for every commuting pair of filters.
void check_de_morgan(CheckWriter& w, const std::string& scope,
                     const std::vector<std::pair<std::string, Map>>& candidates) {
  std::vector<std::pair<std::string, Proposition>> filters;
  for (const auto& [name, m] : candidates) {
    if (m.is_filter()) filters.emplace_back(name, Proposition::from_map(m));
  }
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < filters.size(); ++i) {
    for (std::size_t j = i + 1; j < filters.size(); ++j) {
      const auto& p = filters[i].second;
      const auto& q = filters[j].second;
      if (!commutes(p, q)) continue;
      ++pairs;
      const bool ok = negate(meet(p, q)) == join(negate(p), negate(q)) &&
                      negate(join(p, q)) == meet(negate(p), negate(q));
      if (!ok) {
        w.fail(scope, "filters", "de_morgan", filters[i].first + "|" + filters[j].first);
        return;
      }
    }
  }
  if (pairs == 0) {
    w.skip(scope, "filters", "de_morgan", "no compatible pair");
  } else {
    w.pass(scope, "filters", "de_morgan");
  }
}

void check_associativity(CheckWriter& w, const std::string& scope, const SpacePtr& space, const std::vector<Map>& gens,
                         const std::vector<std::string>& names) {
  Semigroup s;
  try {
    s = closure(space, gens, names, kCheckClosureLimit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LimitExceeded) throw;
    w.skip(scope, "semigroup", "associativity", "closure exceeds limit");
    return;
  }
  const std::size_t n = s.size();
  auto test = [&](std::size_t i, std::size_t j, std::size_t k) {
    const Map& a = s.elements[i];
    const Map& b = s.elements[j];
    const Map& c = s.elements[k];
    if ((a * b) * c == a * (b * c)) return true;
    w.fail(scope, "semigroup", "associativity", s.words[i] + "|" + s.words[j] + "|" + s.words[k]);
    return false;
  };
  if (n <= kExhaustiveAssociativity) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (!test(i, j, k)) return;
        }
      }
    }
  } else {
    std::mt19937 rng(kCheckSeed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < kSampledTriples; ++t) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (!test(i, j, pick(rng))) return;
    }
  }
  w.pass(scope, "semigroup", "associativity");
}

std::vector<const Map*> maps_of(const Observable& o) {
  std::vector<const Map*> maps{&o.map()};
  for (const auto& sp : o.family()) maps.push_back(&sp.projection.map());
  return maps;
}

/// Maps and all spectral projections commute pairwise.
std::optional<StateIndex> observable_commutation_witness(const Observable& a, const Observable& b) {
  for (const Map* x : maps_of(a)) {
    for (const Map* y : maps_of(b)) {
      if (auto z = commutation_witness(*x, *y)) return z;
    }
  }
  return std::nullopt;
}

void check_system(CheckWriter& w, const dsl::SystemModel& s) {
  for (const auto& v : s.violations) w.fail(s.name, "model", "load", v);
  std::vector<std::pair<std::string, Map>> filters;
  for (const auto& o : s.observables) {
    check_observable(w, s.name, o.name, o.observable);
    for (const auto& sp : o.observable.family()) filters.emplace_back(o.name + "_" + sp.outcome, sp.projection.map());
  }
  for (const auto& p : s.propositions) {
    check_proposition(w, s.name, p.name, p.map);
    filters.emplace_back(p.name, p.map);
  }
  check_de_morgan(w, s.name, filters);
  std::vector<std::string> names;
  const auto gens = s.generators(&names);
  check_associativity(w, s.name, s.space, gens, names);
}

void check_composite(CheckWriter& w, const dsl::CompositeModel& c) {
  for (const auto& v : c.violations) w.fail(c.name, "model", "load", v);
  const SpacePtr& space = c.composite.space();
  std::vector<std::pair<std::string, Map>> filters;

  for (std::size_t i = 0; i < c.lifted.size(); ++i) {
    for (const auto& sp : c.lifted[i].observable.family()) {
      filters.emplace_back(c.lifted[i].name + "_" + sp.outcome, sp.projection.map());
    }
    for (std::size_t j = i + 1; j < c.lifted.size(); ++j) {
      if (c.lifted[i].slot == c.lifted[j].slot) continue;
      const auto z = observable_commutation_witness(c.lifted[i].observable, c.lifted[j].observable);
      w.result(c.name, c.lifted[i].name + "|" + c.lifted[j].name, "commutation", !z, state_witness(space, z));
    }
  }
  std::vector<const dsl::NamedObservable*> sound_globals;
  for (const auto& g : c.globals) {
    check_observable(w, c.name, g.name, g.observable);
    if (verify_spectral_family(g.observable).passed()) sound_globals.push_back(&g);
  }
  for (const auto& p : c.propositions) {
    check_proposition(w, c.name, p.name, p.map);
    filters.emplace_back(p.name, p.map);
  }
  for (const auto& p : c.preps) {
    check_proposition(w, c.name, p.name, p.map);
    filters.emplace_back(p.name, p.map);
    const bool nonempty = !p.map.fixed_points().empty();
    w.result(c.name, p.name, "nonempty_certainty", nonempty, "");
    if (!nonempty || !p.map.is_idempotent()) continue;

    const Proposition prep = Proposition::from_map(p.map);
    auto signal = [&](const std::string& n1, const Observable& l1, const std::string& n2, const Observable& l2) {
      const auto r = check_no_signaling(prep, l1, l2);
      std::string witness;
      if (!r.holds) witness = state_witness(space, r.witness) + " " + r.outcome;
      w.result(c.name, p.name + ":" + n1 + "|" + n2, "no_signaling", r.holds, witness);
    };
    for (std::size_t i = 0; i < c.lifted.size(); ++i) {
      for (std::size_t j = 0; j < c.lifted.size(); ++j) {
        if (c.lifted[i].slot == c.lifted[j].slot) continue;
        signal(c.lifted[i].name, c.lifted[i].observable, c.lifted[j].name, c.lifted[j].observable);
      }
      for (const auto* g : sound_globals) {
        signal(c.lifted[i].name, c.lifted[i].observable, g->name, g->observable);
        signal(g->name, g->observable, c.lifted[i].name, c.lifted[i].observable);
      }
    }
  }
  check_de_morgan(w, c.name, filters);
  std::vector<std::string> names;
  const auto gens = c.generators(&names);
  check_associativity(w, c.name, space, gens, names);
}

// ---------------------------------------------------------------------------
// Target resolution

struct Target {
  const dsl::SystemModel* system = nullptr;
  const dsl::CompositeModel* composite = nullptr;

  const std::string& name() const { return system ? system->name : composite->name; }
  const SpacePtr& space() const { return system ? system->space : composite->composite.space(); }

  std::vector<std::pair<std::string, const Observable*>> observables() const {
    std::vector<std::pair<std::string, const Observable*>> out;
    if (system) {
      for (const auto& o : system->observables) out.emplace_back(o.name, &o.observable);
    } else {
      for (const auto& l : composite->lifted) out.emplace_back(l.name, &l.observable);
      for (const auto& g : composite->globals) out.emplace_back(g.name, &g.observable);
    }
    return out;
  }

  const Observable* find_observable(std::string_view n) const {
    if (system) {
      const auto* o = system->find_observable(n);
      return o ? &o->observable : nullptr;
    }
    return composite->find_observable(n);
  }

  /// An observable contributes its map and projections; propositions and preps their map.
  std::vector<Map> maps_named(const std::vector<std::string>& names) const {
    std::vector<Map> out;
    for (const auto& n : names) {
      if (const Observable* o = find_observable(n)) {
        for (const Map* m : maps_of(*o)) out.push_back(*m);
        continue;
      }
      const std::vector<dsl::NamedMap>* lists[] = {system ? &system->propositions : &composite->propositions,
                                                   system ? nullptr : &composite->preps};
      bool found = false;
      for (const auto* list : lists) {
        if (!list) continue;
        for (const auto& p : *list) {
          if (p.name == n) {
            out.push_back(p.map);
            found = true;
          }
        }
      }
      if (!found) throw UsageError("unknown observable or proposition '" + n + "' in " + name());
    }
    return out;
  }

  std::vector<Map> generators(std::vector<std::string>* names) const {
    return system ? system->generators(names) : composite->generators(names);
  }
};

Target resolve_target(const dsl::Model& model, const std::string& name) {
  if (name.empty()) {
    if (!model.systems.empty()) return {&model.systems.front(), nullptr};
    throw UsageError("model declares no system");
  }
  if (const auto* s = model.find_system(name)) return {s, nullptr};
  if (const auto* c = model.find_composite(name)) return {nullptr, c};
  throw UsageError("no system or composite named '" + name + "'");
}

const dsl::CompositeModel& resolve_composite(const dsl::Model& model, const std::string& name) {
  if (name.empty()) {
    if (model.composites.empty()) throw UsageError("model declares no composite");
    return model.composites.front();
  }
  if (const auto* c = model.find_composite(name)) return *c;
  throw UsageError("no composite named '" + name + "'");
}

Semigroup target_closure(const Target& t) {
  std::vector<std::string> names;
  const auto gens = t.generators(&names);
  return closure(t.space(), gens, names);
}

// ---------------------------------------------------------------------------
// Subcommands

CommandResult cmd_check(const dsl::Model& model) {
  const auto outcome = run_check(model);
  return {outcome.passed ? kExitOk : kExitViolation, outcome.report, {}};
}

CommandResult cmd_table(const dsl::Model& model, const CommandOptions& opt) {
  const Target t = resolve_target(model, opt.system);
  const auto obs = t.observables();
  CsvReport csv;
  std::vector<std::string> header{"observable"};
  for (const auto& o : obs) header.push_back(o.first);
  csv.row(header);
  for (const auto& a : obs) {
    std::vector<std::string> row{a.first};
    for (const auto& b : obs) row.push_back(observable_commutation_witness(*a.second, *b.second) ? "0" : "1");
    csv.row(row);
  }
  return {kExitOk, csv.str(), {}};
}

CommandResult cmd_commutant(const dsl::Model& model, const CommandOptions& opt) {
  const Target t = resolve_target(model, opt.system);
  if (opt.of.empty()) throw UsageError("commutant needs --of");
  const Semigroup s = target_closure(t);
  const auto subset = t.maps_named(opt.of);
  const auto comm = commutant(subset, s);
  CsvReport csv;
  csv.metric("target", t.name());
  csv.metric("of", join_labels(opt.of));
  csv.metric("semigroup_size", std::to_string(s.size()));
  csv.metric("commutant_size", std::to_string(comm.size()));
  csv.row({"word", "map"});
  for (const auto& m : comm) csv.row({s.words[*s.index_of(m)], m.to_string()});
  return {kExitOk, csv.str(), {}};
}

CommandResult cmd_split(const dsl::Model& model, const CommandOptions& opt) {
  const Target t = resolve_target(model, opt.system);
  const auto& names = opt.local.empty() ? opt.of : opt.local;
  if (names.empty()) throw UsageError("split needs --local");
  const Semigroup s = target_closure(t);
  const auto gens = t.maps_named(names);
  const auto r = epistemic_split(s, gens, names);
  CsvReport csv;
  csv.metric("target", t.name());
  csv.metric("observer", join_labels(names));
  csv.metric("ambient_size", std::to_string(r.ambient_size));
  csv.metric("observer_size", std::to_string(r.subsemigroup.size()));
  csv.metric("complementary_pairs", std::to_string(r.complementary_pairs.size()));
  csv.metric("overlap", std::to_string(r.overlap.size()));
  csv.row({"inside", "outside"});
  for (const auto& [i, o] : r.complementary_pairs) csv.row({s.words[i], s.words[o]});
  return {kExitOk, csv.str(), {}};
}

CommandResult cmd_entangle(const dsl::Model& model, const CommandOptions& opt) {
  const auto& c = resolve_composite(model, opt.system);
  const dsl::NamedMap* prep = opt.prep.empty() ? (c.preps.empty() ? nullptr : &c.preps.front()) : c.find_prep(opt.prep);
  if (!prep) throw UsageError("no preparation " + (opt.prep.empty() ? "declared in " + c.name : "'" + opt.prep + "'"));
  if (!prep->map.is_idempotent()) throw UsageError("preparation '" + prep->name + "' is not a proposition");

  std::vector<std::string> pair = opt.of;
  if (pair.empty()) {
    for (const auto& l : c.lifted) {
      if (pair.empty() && l.slot == 0) pair.push_back(l.name);
      if (pair.size() == 1 && l.slot == 1) {
        pair.push_back(l.name);
        break;
      }
    }
  }
  if (pair.size() != 2) throw UsageError("entangle needs two observables in --of");
  const Observable* l1 = c.find_observable(pair[0]);
  const Observable* l2 = c.find_observable(pair[1]);
  if (!l1 || !l2) throw UsageError("unknown observable '" + (l1 ? pair[1] : pair[0]) + "' in " + c.name);

  const Proposition p = Proposition::from_map(prep->map);
  const auto table = possibilistic_correlation(p, *l1, *l2);
  const auto forward = check_no_signaling(p, *l1, *l2);
  const auto backward = check_no_signaling(p, *l2, *l1);
  const SpacePtr& space = c.composite.space();

  auto outcome_names = [](const std::vector<std::size_t>& idx, const std::vector<std::string>& labels) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(labels[i]);
    return join_labels(out);
  };
  CsvReport csv;
  csv.metric("composite", c.name);
  csv.metric("prep", prep->name);
  csv.metric("l1", pair[0]);
  csv.metric("l2", pair[1]);
  csv.metric("certainty_size", std::to_string(table.certainty.size()));
  csv.metric("joint_size", std::to_string(table.joint.size()));
  csv.metric("marginal1", outcome_names(table.marginal1, table.outcomes1));
  csv.metric("marginal2", outcome_names(table.marginal2, table.outcomes2));
  csv.metric("score", table.score);
  csv.metric("l1_determines_l2", yes_no(table.l1_determines_l2));
  csv.metric("l2_determines_l1", yes_no(table.l2_determines_l1));
  csv.metric("no_signaling_l1_l2", yes_no(forward.holds));
  csv.metric("no_signaling_l2_l1", yes_no(backward.holds));
  if (!forward.holds) csv.metric("witness_l1_l2", state_witness(space, forward.witness) + " " + forward.outcome);
  if (!backward.holds) csv.metric("witness_l2_l1", state_witness(space, backward.witness) + " " + backward.outcome);
  csv.row({"outcome1", "outcome2"});
  for (const auto& [a, b] : table.joint) csv.row({table.outcomes1[a], table.outcomes2[b]});
  return {forward.holds && backward.holds ? kExitOk : kExitViolation, csv.str(), {}};
}

std::optional<double> numeric_outcome(std::string_view label) {
  if (!label.empty() && label.front() == '+') label.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
  if (ec != std::errc() || ptr != label.data() + label.size()) return std::nullopt;
  return v;
}

CommandResult cmd_matter(const dsl::Model* model, const CommandOptions& opt) {
  using namespace matter;
  CsvReport csv;
  bool ok = true;
  Eigen::Index dim = opt.n > 0 && opt.n <= 16 ? opt.n : 0;
  std::vector<std::pair<std::string, ComplexMatrix<double>>> embedded;
  std::vector<std::string> labels;

  if (model) {
    const Target t = resolve_target(*model, opt.system);
    dim = static_cast<Eigen::Index>(t.space()->size());
    labels = t.space()->labels();
    csv.metric("target", t.name());
    for (const auto& [name, o] : t.observables()) {
      if (!opt.of.empty() && std::find(opt.of.begin(), opt.of.end(), name) == opt.of.end()) continue;
      ComplexMatrix<double> m = ComplexMatrix<double>::Zero(dim, dim);
      bool numeric = true;
      for (const auto& sp : o->family()) {
        const auto v = numeric_outcome(sp.outcome);
        if (!v) {
          numeric = false;
          break;
        }
        for (StateIndex z : sp.projection.certainty_set()) m(z, z) = *v;
      }
      if (!numeric) {
        if (!opt.of.empty()) throw UsageError("observable '" + name + "' has non-numeric outcomes");
        continue;
      }
      embedded.emplace_back(name, std::move(m));
    }
  } else {
    if (dim < 2) throw UsageError("matter without a model needs --n between 2 and 16");
    for (Eigen::Index k = 0; k < dim; ++k) labels.push_back(std::to_string(k));
    embedded.emplace_back("clock", weyl_pair<double>(static_cast<int>(dim)).clock.cast<Complex<double>>());
  }
  csv.metric("dimension", std::to_string(dim));

  for (const auto& [name, m] : embedded) {
    const auto decomposition = spectral_decompose(m);
    std::vector<std::string> values;
    for (double v : decomposition.eigenvalues) values.push_back(format_number(v));
    const double err = max_abs(reconstruct(decomposition) - m);
    ok = ok && err <= 1e-8;
    csv.row({"spectrum", name, join_labels(values)});
    csv.row({"reconstruction_error", name, format_number(err)});
    for (Eigen::Index z = 0; z < dim; ++z) {
      const auto e = expectation(DensityState<double>::basis(dim, z), m);
      csv.row({"expectation", name + "@" + labels[static_cast<std::size_t>(z)], format_number(e.real())});
    }
  }

  std::vector<std::pair<std::string, DensityState<double>>> states;
  states.emplace_back("mixed", DensityState<double>::maximally_mixed(dim));
  states.emplace_back(labels.front(), DensityState<double>::basis(dim, 0));
  for (const auto& [name, rho] : states) {
    const auto g = gns_construct(ExpectationFunctional<double>(rho));
    ok = ok && g.gram_psd() && g.multiplication_residual <= kMultiplicationTolerance;
    csv.row({"gns_carrier_dim", name, std::to_string(g.carrier_dim)});
    csv.row({"gns_null_dim", name, std::to_string(g.null_dim)});
    csv.row({"gns_min_gram_eigenvalue", name, format_number(std::abs(g.min_gram_eigenvalue) < 1e-14 ? 0.0 : g.min_gram_eigenvalue)});
    csv.row({"gns_residual_ok", name, yes_no(g.multiplication_residual <= kMultiplicationTolerance)});
  }

  if (dim >= 2 && !embedded.empty()) {
    std::vector<ComplexMatrix<double>> basis;
    for (const auto& e : embedded) basis.push_back(e.second);
    const auto r = physically_equivalent(DensityState<double>::basis(dim, 0), DensityState<double>::basis(dim, 1), basis);
    csv.row({"equivalent", labels[0] + "|" + labels[1], yes_no(r.equivalent)});
    csv.row({"equivalence_spanning", labels[0] + "|" + labels[1], yes_no(r.spanning)});
  }

  const int weyl_n = static_cast<int>(std::max<Eigen::Index>(dim, 2));
  const auto defect = weyl_defect(weyl_pair<long long>(weyl_n));
  ok = ok && defect == 0;
  csv.row({"weyl_defect", std::to_string(weyl_n), std::to_string(defect)});
  return {ok ? kExitOk : kExitViolation, csv.str(), {}};
}

CommandResult cmd_wdw(const CommandOptions& opt) {
  using namespace wdw;
  if (opt.n < 3 || opt.n > 4001) throw UsageError("--n must lie in [3, 4001]");
  const Grid<double> grid(opt.n);
  const double two_pi = 2.0 * std::numbers::pi;
  WaveState<double> psi;
  CsvReport csv;
  csv.metric("profile", opt.profile);
  if (opt.profile == "product") {
    const double k = opt.k;
    auto s = [&](double u) { return std::sin(two_pi * k * u); };
    psi.resize(grid.n, grid.n);
    for (Eigen::Index i = 0; i < grid.n; ++i) {
      for (Eigen::Index j = 0; j < grid.n; ++j) psi(i, j) = s(grid.coord(i)) * s(grid.coord(j));
    }
    csv.metric("k", std::to_string(opt.k));
  } else if (opt.profile == "ridge") {
    if (!(opt.width > 0)) throw UsageError("--width must be positive");
    const double w = opt.width;
    const auto profiles = sample_profiles<double>([w](double s) { return std::exp(-s * s / (2 * w * w)); },
                                                  [](double) { return 0.0; }, grid);
    psi = dalembert(profiles, grid);
    csv.metric("width", opt.width);
  } else if (opt.profile == "custom") {
    if (opt.field.empty()) throw UsageError("--profile custom needs --field FILE");
    std::ifstream in(opt.field);
    if (!in) throw UsageError("cannot read field file '" + opt.field + "'");
    psi = read_field_csv(in);
    if (psi.rows() != psi.cols() || psi.rows() < 3) throw UsageError("custom field must be square with n >= 3");
  } else {
    throw UsageError("unknown profile '" + opt.profile + "' (product, ridge, custom)");
  }
  const Grid<double> field_grid(psi.rows());
  csv.metric("n", std::to_string(field_grid.n));
  csv.metric("residual", residual(psi, field_grid));
  const auto spectrum = schmidt(psi);
  csv.metric("schmidt_rank", std::to_string(spectrum.rank));
  csv.metric("schmidt_entropy_bits", spectrum.entropy_bits);
  csv.metric("sigma2_over_sigma1",
             spectrum.singular_values.size() > 1 ? spectrum.singular_values(1) / spectrum.singular_values(0) : 0.0);
  const auto control = control_report(psi);
  csv.metric("mutual_information_bits", control.mutual_information);
  csv.metric("entropy_x_bits", control.entropy_x);
  csv.metric("entropy_y_bits", control.entropy_y);
  csv.metric("x_controls_y", control.x_controls_y);
  csv.metric("y_controls_x", control.y_controls_x);
  csv.metric("time_like_axis", control.time_like_axis == '-' ? std::string("none") : std::string(1, control.time_like_axis));
  return {kExitOk, csv.str(), {}};
}

CommandResult cmd_sync(const CommandOptions& opt) {
  if (opt.agents < 2 || opt.agents > 6) throw UsageError("--agents must lie in [2, 6]");
  if (opt.horizon < 0 || opt.horizon > 10) throw UsageError("--horizon must lie in [0, 10]");
  std::vector<int> offsets = opt.offsets;
  if (offsets.empty()) offsets.assign(static_cast<std::size_t>(opt.agents - 1), 0);
  const auto prep = build_sync_state(static_cast<std::size_t>(opt.agents), offsets, opt.horizon, opt.band);
  std::vector<TimeObservable> times;
  for (int k = 0; k < opt.agents; ++k) {
    times.push_back(make_time_observable(prep.composite, static_cast<std::size_t>(k), opt.horizon));
  }
  const auto comm = verify_time_commutativity(times);

  std::vector<std::string> offset_text;
  for (int d : offsets) offset_text.push_back(std::to_string(d));
  CsvReport csv;
  csv.metric("agents", std::to_string(opt.agents));
  csv.metric("offsets", join_labels(offset_text));
  csv.metric("horizon", std::to_string(opt.horizon));
  csv.metric("band", std::to_string(opt.band));
  csv.metric("certainty_size", std::to_string(prep.proposition.certainty_set().size()));
  csv.metric("time_commutativity", yes_no(comm.all_commute));
  csv.row({"slot_i", "slot_j", "score", "joint_size", "functional_dependence"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = i + 1; j < times.size(); ++j) {
      const auto table = sync_table(prep, times[i], times[j]);
      csv.row({std::to_string(i + 1), std::to_string(j + 1), format_number(table.score),
               std::to_string(table.joint.size()), yes_no(table.functional_dependence())});
    }
  }
  return {comm.all_commute ? kExitOk : kExitViolation, csv.str(), {}};
}

CommandResult cmd_operationalize(const CommandOptions& opt) {
  if (opt.horizon < 0 || opt.horizon > 50) throw UsageError("--horizon must lie in [0, 50]");
  const TimeObservable t = make_time_observable(opt.horizon);
  OperationalizationMap f = opt.map == "coarse"     ? OperationalizationMap::coarse(opt.horizon)
                            : opt.map == "integers" ? OperationalizationMap::to_integers(opt.horizon)
                                                    : throw UsageError("unknown --map '" + opt.map + "'");
  const auto op = operationalize(t, f);
  const auto laws = verify_spectral_family(op.observable);

  CsvReport csv;
  csv.metric("horizon", std::to_string(opt.horizon));
  csv.metric("map", opt.map);
  csv.metric("outcome_count", std::to_string(op.outcome_count));
  csv.metric("now_retained", yes_no(op.now_retained));
  csv.metric("order_preserving", yes_no(op.order_preserving));
  csv.metric("bijective", yes_no(op.bijective));
  for (const auto& law : laws.laws) csv.metric(law.law, law.passed ? "pass" : "fail");

  bool past_ok = true;
  if (op.observable.outcome_index("past")) {
    std::vector<Proposition> negatives;
    for (const auto& sp : t.observable.family()) {
      if (time_value(sp.outcome) < 0) negatives.push_back(sp.projection);
    }
    past_ok = op.observable.projection("past") == join_all(negatives);
    csv.metric("past_is_join_of_negative_labels", yes_no(past_ok));
  }
  csv.row({"outcome", "members"});
  const SpacePtr& window = t.observable.space();
  for (const auto& sp : op.observable.family()) {
    std::vector<std::string> members;
    for (StateIndex z : sp.projection.certainty_set()) members.push_back(window->label(z));
    csv.row({sp.outcome, join_labels(members)});
  }
  return {laws.passed() && past_ok ? kExitOk : kExitViolation, csv.str(), {}};
}

CommandResult cmd_format(const dsl::Model& model) { return {kExitOk, dsl::print_model(model.decl), {}}; }

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check", "table",  "commutant", "split",          "entangle",
                                              "matter", "wdw",   "sync",      "operationalize", "format"};
  return names;
}

bool command_needs_model(std::string_view command) {
  return command == "check" || command == "table" || command == "commutant" || command == "split" ||
         command == "entangle" || command == "format";
}

CheckOutcome run_check(const dsl::Model& model) {
  CheckWriter w;
  for (const auto& s : model.systems) check_system(w, s);
  for (const auto& c : model.composites) check_composite(w, c);
  return {w.failures() == 0, w.failures(), w.str()};
}

CommandResult execute_command(std::string_view command, const dsl::Model* model, const CommandOptions& options) {
  try {
    if (command_needs_model(command) && !model) throw UsageError(std::string(command) + " needs a model file");
    if (command == "check") return cmd_check(*model);
    if (command == "table") return cmd_table(*model, options);
    if (command == "commutant") return cmd_commutant(*model, options);
    if (command == "split") return cmd_split(*model, options);
    if (command == "entangle") return cmd_entangle(*model, options);
    if (command == "matter") return cmd_matter(model, options);
    if (command == "wdw") return cmd_wdw(options);
    if (command == "sync") return cmd_sync(options);
    if (command == "operationalize") return cmd_operationalize(options);
    if (command == "format") return cmd_format(*model);
    throw UsageError("unknown subcommand '" + std::string(command) + "'");
  } catch (const UsageError& e) {
    return {kExitUsage, {}, e.what()};
  } catch (const Error& e) {
    return {kExitUsage, {}, e.what()};
  }
}

}  // namespace wqt::cli

#include "wqt/dsl.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_set>

namespace wqt::dsl {

ParseError::ParseError(SourcePos pos, std::string message, std::string token)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      pos_(pos),
      message_(std::move(message)),
      token_(std::move(token)) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Word, LBrace, RBrace, Colon, Semi, Arrow, Comma, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '+' ||
         c == '-';
}

constexpr std::array kKeywords = {"system", "states",      "observable", "outcomes", "map",
                                  "proposition", "fixes", "sends",      "compose",  "prep"};

bool is_keyword(std::string_view w) {
  return std::find(kKeywords.begin(), kKeywords.end(), w) != kKeywords.end();
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourcePos start = pos;
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tokens.push_back({Tok::Arrow, "->", start});
      advance(2);
      continue;
    }
    if (is_name_char(c)) {
      std::size_t end = i;
      while (end < text.size() && is_name_char(text[end]) &&
             !(text[end] == '-' && end + 1 < text.size() && text[end + 1] == '>')) {
        ++end;
      }
      tokens.push_back({Tok::Word, std::string(text.substr(i, end - i)), start});
      advance(end - i);
      continue;
    }
    Tok kind;
    switch (c) {
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case ':': kind = Tok::Colon; break;
      case ';': kind = Tok::Semi; break;
      case ',': kind = Tok::Comma; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default: {
        const unsigned char uc = static_cast<unsigned char>(c);
        std::string shown = uc >= 0x20 && uc < 0x7f ? std::string(1, c) : "\\x" + std::to_string(uc);
        throw ParseError(start, "unexpected character '" + shown + "'", shown);
      }
    }
    tokens.push_back({kind, std::string(1, c), start});
    advance(1);
  }
  tokens.push_back({Tok::End, "", pos});
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ModelDecl parse() {
    ModelDecl model;
    while (peek().kind != Tok::End) {
      if (is_word("system")) {
        if (!model.composites.empty()) fail(peek(), "systems must be declared before composites");
        model.systems.push_back(parse_system());
      } else if (is_word("compose")) {
        model.composites.push_back(parse_composite());
      } else {
        fail(peek(), "expected 'system' or 'compose'");
      }
    }
    return model;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Word && peek().text == w; }
  bool at_name() const { return peek().kind == Tok::Word && !is_keyword(peek().text); }
  bool at_ref() const { return at_name() || peek().kind == Tok::LParen; }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw ParseError(t.pos, message + (t.kind == Tok::End ? " at end of input" : ", found '" + t.text + "'"),
                     t.kind == Tok::End ? "" : t.text);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    take();
  }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail(peek(), "expected '" + std::string(w) + "'");
    take();
  }

  Name parse_name() {
    if (peek().kind != Tok::Word) fail(peek(), "expected a name");
    if (is_keyword(peek().text)) fail(peek(), "reserved word cannot be used as a name");
    if (peek().text == "bot") fail(peek(), "'bot' is reserved for the absurd state");
    Token t = take();
    return {t.text, t.pos};
  }

  Name parse_ref() {
    if (peek().kind != Tok::LParen) return parse_name();
    const SourcePos start = take().pos;
    std::vector<std::string> parts{parse_name().text};
    while (peek().kind == Tok::Comma) {
      take();
      parts.push_back(parse_name().text);
    }
    expect(Tok::RParen, "')' to close the tuple");
    return {tuple_label(parts), start};
  }

  MapEntry parse_entry() {
    Name from = parse_ref();
    expect(Tok::Arrow, "'->'");
    Name to = parse_ref();
    return {std::move(from), std::move(to)};
  }

  ObservableDecl parse_observable() {
    expect_word("observable");
    ObservableDecl o;
    o.name = parse_name();
    expect_word("outcomes");
    expect(Tok::LBrace, "'{'");
    do {
      OutcomeDecl out;
      out.outcome = parse_name();
      expect(Tok::Colon, "':'");
      if (!at_ref()) fail(peek(), "expected an outcome member");
      while (at_ref()) out.members.push_back(parse_ref());
      expect(Tok::Semi, "';'");
      o.outcomes.push_back(std::move(out));
    } while (peek().kind != Tok::RBrace);
    take();
    if (is_word("map")) {
      take();
      o.has_map = true;
      expect(Tok::LBrace, "'{'");
      o.map.push_back(parse_entry());
      while (peek().kind == Tok::Comma) {
        take();
        o.map.push_back(parse_entry());
      }
      expect(Tok::RBrace, "'}'");
    }
    return o;
  }

  PropositionDecl parse_proposition() {
    expect_word("proposition");
    PropositionDecl p;
    p.name = parse_name();
    expect_word("fixes");
    if (!at_ref()) fail(peek(), "expected a state after 'fixes'");
    while (at_ref()) p.fixes.push_back(parse_ref());
    if (is_word("sends")) {
      take();
      if (!at_ref()) fail(peek(), "expected an entry after 'sends'");
      while (at_ref()) p.sends.push_back(parse_entry());
    }
    return p;
  }

  SystemDecl parse_system() {
    expect_word("system");
    SystemDecl s;
    s.name = parse_name();
    expect(Tok::LBrace, "'{'");
    expect_word("states");
    if (!at_name()) fail(peek(), "expected a state name");
    while (at_name()) s.states.push_back(parse_name());
    while (peek().kind != Tok::RBrace) {
      if (is_word("observable")) {
        s.items.emplace_back(parse_observable());
      } else if (is_word("proposition")) {
        s.items.emplace_back(parse_proposition());
      } else {
        fail(peek(), "expected 'observable', 'proposition' or '}'");
      }
    }
    take();
    return s;
  }

  CompositeDecl parse_composite() {
    expect_word("compose");
    CompositeDecl c;
    c.name = parse_name();
    while (at_name()) c.systems.push_back(parse_name());
    if (c.systems.size() < 2) fail(peek(), "a composite needs at least two component systems");
    while (true) {
      if (is_word("prep")) {
        take();
        PrepDecl p;
        p.name = parse_name();
        expect_word("fixes");
        if (peek().kind != Tok::LParen) fail(peek(), "expected a tuple state");
        while (at_ref()) p.fixes.push_back(parse_ref());
        c.items.emplace_back(std::move(p));
      } else if (is_word("observable")) {
        c.items.emplace_back(parse_observable());
      } else if (is_word("proposition")) {
        c.items.emplace_back(parse_proposition());
      } else {
        break;
      }
    }
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Resolution

[[noreturn]] void fail_at(const Name& n, const std::string& message) { throw ParseError(n.pos, message, n.text); }

constexpr std::size_t kMaxCompositeStates = 100'000;

bool is_tuple(const Name& n) { return !n.text.empty() && n.text.front() == '('; }

/// Resolves state references of one space (system states or composite tuples).
class Scope {
 public:
  Scope(SpacePtr space, bool tuples) : space_(std::move(space)), tuples_(tuples) {}

  const SpacePtr& space() const { return space_; }

  StateIndex state(const Name& n) const {
    if (tuples_ && !is_tuple(n)) fail_at(n, "expected a tuple state, found '" + n.text + "'");
    if (!tuples_ && is_tuple(n)) fail_at(n, "tuple states are only valid in composites");
    if (auto z = space_->find(n.text)) return *z;
    fail_at(n, (tuples_ ? "unknown tuple state '" : "unknown state '") + n.text + "'");
  }

  Map map_from(const std::vector<MapEntry>& entries, bool identity_default, const std::vector<Name>& fixes) const {
    std::vector<StateIndex> image(space_->size(), space_->bottom());
    std::vector<bool> assigned(space_->size(), false);
    for (const Name& f : fixes) {
      const StateIndex z = state(f);
      if (assigned[z]) fail_at(f, "duplicate state '" + f.text + "'");
      assigned[z] = true;
      image[z] = z;
    }
    for (const auto& e : entries) {
      const StateIndex from = state(e.from);
      const StateIndex to = state(e.to);
      if (assigned[from]) fail_at(e.from, "conflicting entry for '" + e.from.text + "'");
      assigned[from] = true;
      image[from] = to;
    }
    if (identity_default) {
      for (StateIndex z = 0; z < image.size(); ++z) {
        if (!assigned[z]) image[z] = z;
      }
    }
    return Map(space_, std::move(image));
  }

 private:
  SpacePtr space_;
  bool tuples_;
};

void claim(std::set<std::string>& names, const Name& n, const char* what) {
  if (!names.insert(n.text).second) fail_at(n, std::string("duplicate ") + what + " '" + n.text + "'");
}

/// Builds the observable of a declaration. Returns nullopt (with a violation
/// recorded) when an outcome refers to a non-idempotent proposition.
std::optional<Observable> build_observable(const ObservableDecl& d, const Scope& scope,
                                           const std::vector<NamedMap>& propositions,
                                           std::vector<std::string>& violations) {
  std::set<std::string> outcomes;
  std::vector<SpectralProjection> family;
  bool ok = true;
  for (const auto& out : d.outcomes) {
    claim(outcomes, out.outcome, "outcome");
    const NamedMap* prop = nullptr;
    for (const auto& m : out.members) {
      auto it = std::find_if(propositions.begin(), propositions.end(),
                             [&](const NamedMap& p) { return p.name == m.text; });
      if (it != propositions.end()) {
        if (out.members.size() != 1) fail_at(m, "proposition '" + m.text + "' must be the only member of its outcome");
        prop = &*it;
      }
    }
    if (prop) {
      if (!prop->map.is_idempotent()) {
        violations.push_back("observable " + d.name.text + ": outcome " + out.outcome.text + " uses non-idempotent " +
                             prop->name);
        ok = false;
        continue;
      }
      family.push_back({out.outcome.text, Proposition::from_map(prop->map)});
      continue;
    }
    std::vector<StateIndex> members;
    std::set<StateIndex> seen;
    for (const auto& m : out.members) {
      const StateIndex z = scope.state(m);
      if (!seen.insert(z).second) fail_at(m, "duplicate member '" + m.text + "'");
      members.push_back(z);
    }
    family.push_back({out.outcome.text, Proposition::filter(scope.space(), members)});
  }
  Map map = scope.map_from(d.map, true, {});
  if (!ok) return std::nullopt;
  return Observable(std::move(map), std::move(family));
}

SystemModel build_system(const SystemDecl& d) {
  SystemModel s;
  s.name = d.name.text;
  std::set<std::string> names;
  std::vector<std::string> labels;
  for (const auto& st : d.states) {
    claim(names, st, "state");
    labels.push_back(st.text);
  }
  s.space = make_space(std::move(labels));
  const Scope scope(s.space, false);

  for (const auto& item : d.items) {
    std::visit([&](const auto& decl) { claim(names, decl.name, "name"); }, item);
  }
  for (const auto& item : d.items) {
    if (const auto* p = std::get_if<PropositionDecl>(&item)) {
      s.propositions.push_back({p->name.text, scope.map_from(p->sends, false, p->fixes)});
    }
  }
  for (const auto& item : d.items) {
    if (const auto* o = std::get_if<ObservableDecl>(&item)) {
      if (auto obs = build_observable(*o, scope, s.propositions, s.violations)) {
        s.observables.push_back({o->name.text, std::move(*obs)});
      }
    }
  }
  return s;
}

CompositeModel build_composite(const CompositeDecl& d, const std::vector<SystemModel>& systems) {
  std::vector<SpacePtr> slots;
  std::vector<const SystemModel*> members;
  std::size_t states = 1;
  for (const auto& n : d.systems) {
    auto it = std::find_if(systems.begin(), systems.end(), [&](const SystemModel& s) { return s.name == n.text; });
    if (it == systems.end()) fail_at(n, "unknown system '" + n.text + "'");
    slots.push_back(it->space);
    members.push_back(&*it);
    states *= it->space->size();
    if (states > kMaxCompositeStates) fail_at(n, "composite exceeds " + std::to_string(kMaxCompositeStates) + " states");
  }
  CompositeModel c{d.name.text, {}, CompositeSystem(slots), {}, {}, {}, {}, {}};
  for (const auto* m : members) c.systems.push_back(m->name);

  for (std::size_t k = 0; k < members.size(); ++k) {
    const bool unique = std::count(c.systems.begin(), c.systems.end(), c.systems[k]) == 1;
    const std::string prefix = unique ? c.systems[k] : std::to_string(k + 1);
    for (const auto& o : members[k]->observables) {
      c.lifted.push_back({prefix + "." + o.name, k, c.composite.lift(o.observable, k)});
    }
  }

  const Scope scope(c.composite.space(), true);
  std::set<std::string> names;
  for (const auto& item : d.items) {
    std::visit([&](const auto& decl) { claim(names, decl.name, "name"); }, item);
  }
  for (const auto& item : d.items) {
    if (const auto* p = std::get_if<PrepDecl>(&item)) {
      c.preps.push_back({p->name.text, scope.map_from({}, false, p->fixes)});
    } else if (const auto* q = std::get_if<PropositionDecl>(&item)) {
      c.propositions.push_back({q->name.text, scope.map_from(q->sends, false, q->fixes)});
    }
  }
  for (const auto& item : d.items) {
    if (const auto* o = std::get_if<ObservableDecl>(&item)) {
      if (auto obs = build_observable(*o, scope, c.propositions, c.violations)) {
        c.globals.push_back({o->name.text, std::move(*obs)});
      }
    }
  }
  return c;
}

void append_unique(std::vector<Map>& maps, std::vector<std::string>* names, const Map& m, const std::string& name) {
  if (std::find(maps.begin(), maps.end(), m) != maps.end()) return;
  maps.push_back(m);
  if (names) names->push_back(name);
}

// ---------------------------------------------------------------------------
// Printer

void print_entries(std::string& out, const std::vector<MapEntry>& entries, const char* sep) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += sep;
    out += entries[i].from.text + " -> " + entries[i].to.text;
  }
}

void print_observable(std::string& out, const ObservableDecl& o, const char* indent) {
  out += indent;
  out += "observable " + o.name.text + " outcomes {";
  for (const auto& oc : o.outcomes) {
    out += " " + oc.outcome.text + ":";
    for (const auto& m : oc.members) out += " " + m.text;
    out += ";";
  }
  out += " }";
  if (o.has_map) {
    out += " map { ";
    print_entries(out, o.map, ", ");
    out += " }";
  }
  out += "\n";
}

void print_proposition(std::string& out, const PropositionDecl& p, const char* indent) {
  out += indent;
  out += "proposition " + p.name.text + " fixes";
  for (const auto& f : p.fixes) out += " " + f.text;
  if (!p.sends.empty()) {
    out += " sends ";
    print_entries(out, p.sends, " ");
  }
  out += "\n";
}

}  // namespace

// ---------------------------------------------------------------------------

const NamedObservable* SystemModel::find_observable(std::string_view n) const {
  for (const auto& o : observables) {
    if (o.name == n) return &o;
  }
  return nullptr;
}

const NamedMap* SystemModel::find_proposition(std::string_view n) const {
  for (const auto& p : propositions) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

std::vector<Map> SystemModel::generators(std::vector<std::string>* names) const {
  std::vector<Map> maps;
  for (const auto& o : observables) {
    append_unique(maps, names, o.observable.map(), o.name);
    for (const auto& sp : o.observable.family()) {
      append_unique(maps, names, sp.projection.map(), o.name + "_" + sp.outcome);
    }
  }
  for (const auto& p : propositions) append_unique(maps, names, p.map, p.name);
  return maps;
}

const Observable* CompositeModel::find_observable(std::string_view n) const {
  for (const auto& l : lifted) {
    if (l.name == n) return &l.observable;
    if (std::to_string(l.slot + 1) + l.name.substr(l.name.find('.')) == n) return &l.observable;
  }
  for (const auto& g : globals) {
    if (g.name == n) return &g.observable;
  }
  return nullptr;
}

const NamedMap* CompositeModel::find_prep(std::string_view n) const {
  for (const auto& p : preps) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

std::vector<Map> CompositeModel::generators(std::vector<std::string>* names) const {
  std::vector<Map> maps;
  for (const auto& l : lifted) {
    append_unique(maps, names, l.observable.map(), l.name);
    for (const auto& sp : l.observable.family()) {
      append_unique(maps, names, sp.projection.map(), l.name + "_" + sp.outcome);
    }
  }
  for (const auto& g : globals) {
    append_unique(maps, names, g.observable.map(), g.name);
    for (const auto& sp : g.observable.family()) {
      append_unique(maps, names, sp.projection.map(), g.name + "_" + sp.outcome);
    }
  }
  for (const auto& p : propositions) append_unique(maps, names, p.map, p.name);
  for (const auto& p : preps) append_unique(maps, names, p.map, p.name);
  return maps;
}

const SystemModel* Model::find_system(std::string_view n) const {
  for (const auto& s : systems) {
    if (s.name == n) return &s;
  }
  return nullptr;
}

const CompositeModel* Model::find_composite(std::string_view n) const {
  for (const auto& c : composites) {
    if (c.name == n) return &c;
  }
  return nullptr;
}

ModelDecl parse_decl(std::string_view text) { return Parser(lex(text)).parse(); }

Model build_model(ModelDecl decl) {
  Model model;
  std::set<std::string> names;
  for (const auto& s : decl.systems) {
    claim(names, s.name, "system");
    model.systems.push_back(build_system(s));
  }
  for (const auto& c : decl.composites) {
    claim(names, c.name, "composite");
    model.composites.push_back(build_composite(c, model.systems));
  }
  model.decl = std::move(decl);
  return model;
}

Model parse_model(std::string_view text) { return build_model(parse_decl(text)); }

std::string print_model(const ModelDecl& decl) {
  std::string out;
  bool first = true;
  for (const auto& s : decl.systems) {
    if (!first) out += "\n";
    first = false;
    out += "system " + s.name.text + " {\n  states";
    for (const auto& st : s.states) out += " " + st.text;
    out += "\n";
    for (const auto& item : s.items) {
      if (const auto* o = std::get_if<ObservableDecl>(&item)) print_observable(out, *o, "  ");
      if (const auto* p = std::get_if<PropositionDecl>(&item)) print_proposition(out, *p, "  ");
    }
    out += "}\n";
  }
  for (const auto& c : decl.composites) {
    if (!first) out += "\n";
    first = false;
    out += "compose " + c.name.text;
    for (const auto& s : c.systems) out += " " + s.text;
    out += "\n";
    for (const auto& item : c.items) {
      if (const auto* p = std::get_if<PrepDecl>(&item)) {
        out += "  prep " + p->name.text + " fixes";
        for (const auto& f : p->fixes) out += " " + f.text;
        out += "\n";
      }
      if (const auto* o = std::get_if<ObservableDecl>(&item)) print_observable(out, *o, "  ");
      if (const auto* q = std::get_if<PropositionDecl>(&item)) print_proposition(out, *q, "  ");
    }
  }
  return out;
}

}  // namespace wqt::dsl

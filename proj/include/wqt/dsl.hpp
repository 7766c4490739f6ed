#pragma once

// Model-description language for finite WQT models.
//
//   model       := system* composite*
//   system      := "system" NAME "{" "states" NAME+ (observable | proposition)* "}"
//   observable  := "observable" NAME "outcomes" "{" (NAME ":" REF+ ";")+ "}"
//                  ["map" "{" REF "->" REF ("," REF "->" REF)* "}"]
//   proposition := "proposition" NAME "fixes" REF+ ["sends" (REF "->" REF)+]
//   composite   := "compose" NAME NAME NAME+ (prep | observable | proposition)*
//   prep        := "prep" NAME "fixes" TUPLE+
//
// REF is a state (a NAME inside a system, a TUPLE such as (a,1) inside a
// composite). An outcome whose only member names a declared proposition uses
// that proposition as its spectral projection; otherwise the members form a
// block whose filter is the projection. A missing map is the identity and
// unlisted map entries are fixed. Names match [A-Za-z0-9_+-]+; '#' starts a
// comment.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wqt/composition.hpp"
#include "wqt/core_algebra.hpp"

namespace wqt::dsl {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// First error in a model text; positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::string message, std::string token);

  int line() const noexcept { return pos_.line; }
  int column() const noexcept { return pos_.column; }
  const std::string& message() const noexcept { return message_; }
  const std::string& token() const noexcept { return token_; }

 private:
  SourcePos pos_;
  std::string message_;
  std::string token_;
};

/// Identifier or state reference with its source position. Equality ignores position.
struct Name {
  std::string text;
  SourcePos pos;

  friend bool operator==(const Name& a, const Name& b) { return a.text == b.text; }
};

struct MapEntry {
  Name from;
  Name to;
  friend bool operator==(const MapEntry&, const MapEntry&) = default;
};

struct OutcomeDecl {
  Name outcome;
  std::vector<Name> members;
  friend bool operator==(const OutcomeDecl&, const OutcomeDecl&) = default;
};

struct ObservableDecl {
  Name name;
  std::vector<OutcomeDecl> outcomes;
  bool has_map = false;
  std::vector<MapEntry> map;
  friend bool operator==(const ObservableDecl&, const ObservableDecl&) = default;
};

struct PropositionDecl {
  Name name;
  std::vector<Name> fixes;
  std::vector<MapEntry> sends;
  friend bool operator==(const PropositionDecl&, const PropositionDecl&) = default;
};

struct PrepDecl {
  Name name;
  std::vector<Name> fixes;
  friend bool operator==(const PrepDecl&, const PrepDecl&) = default;
};

using SystemItem = std::variant<ObservableDecl, PropositionDecl>;
using CompositeItem = std::variant<PrepDecl, ObservableDecl, PropositionDecl>;

struct SystemDecl {
  Name name;
  std::vector<Name> states;
  std::vector<SystemItem> items;
  friend bool operator==(const SystemDecl&, const SystemDecl&) = default;
};

struct CompositeDecl {
  Name name;
  std::vector<Name> systems;
  std::vector<CompositeItem> items;
  friend bool operator==(const CompositeDecl&, const CompositeDecl&) = default;
};

struct ModelDecl {
  std::vector<SystemDecl> systems;
  std::vector<CompositeDecl> composites;
  friend bool operator==(const ModelDecl&, const ModelDecl&) = default;
};

struct NamedObservable {
  std::string name;
  Observable observable;
};

/// Declared propositions are kept as maps; idempotence is a model check.
struct NamedMap {
  std::string name;
  Map map;
};

/// A named finite state space with its declared observables and propositions.
struct SystemModel {
  std::string name;
  SpacePtr space;
  std::vector<NamedObservable> observables;
  std::vector<NamedMap> propositions;
  /// Load-time problems that are model violations rather than syntax errors,
  /// e.g. an outcome whose proposition is not idempotent.
  std::vector<std::string> violations;

  const NamedObservable* find_observable(std::string_view n) const;
  const NamedMap* find_proposition(std::string_view n) const;
  /// Declared maps in declaration order (observable maps, projections, propositions).
  std::vector<Map> generators(std::vector<std::string>* names = nullptr) const;
};

struct LiftedObservable {
  std::string name;  // "<system>.<observable>" or "<slot>.<observable>"
  std::size_t slot = 0;
  Observable observable;
};

struct CompositeModel {
  std::string name;
  std::vector<std::string> systems;
  CompositeSystem composite;
  std::vector<LiftedObservable> lifted;
  std::vector<NamedObservable> globals;
  std::vector<NamedMap> propositions;
  std::vector<NamedMap> preps;
  std::vector<std::string> violations;

  /// Lifted observables answer to "<system>.<obs>" (when the system occupies one
  /// slot) and "<slot>.<obs>"; globals answer to their own name.
  const Observable* find_observable(std::string_view n) const;
  const NamedMap* find_prep(std::string_view n) const;
  std::vector<Map> generators(std::vector<std::string>* names = nullptr) const;
};

struct Model {
  ModelDecl decl;
  std::vector<SystemModel> systems;
  std::vector<CompositeModel> composites;

  const SystemModel* find_system(std::string_view n) const;
  const CompositeModel* find_composite(std::string_view n) const;
};

/// Syntax only. Throws ParseError.
ModelDecl parse_decl(std::string_view text);
/// Resolves names and builds the semantic model. Throws ParseError for unknown
/// identifiers and duplicate names.
Model build_model(ModelDecl decl);
/// parse_decl + build_model.
Model parse_model(std::string_view text);

/// Canonical text; parse_model(print_model(m)) has an equal declaration.
std::string print_model(const ModelDecl& decl);

}  // namespace wqt::dsl

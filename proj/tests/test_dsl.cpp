#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "wqt/dsl.hpp"

using namespace wqt;
using namespace wqt::dsl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> corpus(const char* sub) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(WQT_SOURCE_DIR) / "tests" / "corpus" / sub)) {
    if (e.path().extension() == ".wqt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<fs::path> bundled_models() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(WQT_SOURCE_DIR) / "models")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

ParseError parse_error_of(std::string_view text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError({}, "", "");
}

/// Parsing either succeeds or throws ParseError; anything else escapes and fails the test.
bool total(std::string_view text) {
  try {
    parse_model(text);
    return true;
  } catch (const ParseError&) {
    return true;
  }
}

}  // namespace

TEST_CASE("minimal model") {
  const auto m = parse_model("system S { states a b proposition P fixes a }");
  REQUIRE(m.systems.size() == 1);
  CHECK(m.systems[0].space->size() == 2);
  REQUIRE(m.systems[0].find_proposition("P") != nullptr);
  CHECK(m.systems[0].find_proposition("P")->map.is_idempotent());
  CHECK(parse_decl(print_model(m.decl)) == m.decl);
}

TEST_CASE("observable blocks and maps") {
  const auto m = parse_model(R"(system S {
  states x y z
  observable O outcomes { low: x y; high: z; } map { x -> y }
})");
  const auto* o = m.systems[0].find_observable("O");
  REQUIRE(o != nullptr);
  CHECK(o->observable.spectrum() == std::vector<std::string>{"low", "high"});
  CHECK(o->observable.projection("low").support().size() == 2);
  CHECK(o->observable.map()(0) == 1);
  CHECK(o->observable.map()(1) == 1);
  CHECK(o->observable.map()(2) == 2);
}

TEST_CASE("composites resolve tuples and lifted names") {
  const auto m = parse_model(R"(system A { states a b observable X outcomes { a: a; b: b; } }
compose W A A
  prep diag fixes (a,a) (b,b))");
  const auto* w = m.find_composite("W");
  REQUIRE(w != nullptr);
  CHECK(w->composite.space()->size() == 4);
  CHECK(w->find_observable("1.X") != nullptr);
  CHECK(w->find_observable("2.X") != nullptr);
  CHECK(w->find_observable("0.X") == nullptr);
  CHECK(w->find_observable("A.X") == nullptr);
  REQUIRE(w->find_prep("diag") != nullptr);
  CHECK(w->find_prep("diag")->map.is_idempotent());
}

TEST_CASE("error positions") {
  SUBCASE("undeclared state") {
    const auto e = parse_error_of("system S {\n  states a b\n  proposition P fixes c\n}\n");
    CHECK(e.line() == 3);
    CHECK(e.column() == 23);
    CHECK(e.token() == "c");
  }
  SUBCASE("duplicate observable names the offender") {
    const auto e = parse_error_of(
        "system S {\n  states a b\n  observable Dup outcomes { x: a b; }\n  observable Dup outcomes { y: a b; }\n}");
    CHECK(e.line() == 4);
    CHECK(e.column() == 14);
    CHECK(std::string(e.what()).find("'Dup'") != std::string::npos);
  }
  SUBCASE("end of input") {
    const auto e = parse_error_of("system S {\n  states a");
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);
  }
}

TEST_CASE("non-idempotent propositions load as violations") {
  const auto m = parse_model("system S { states a b c proposition Shift fixes a sends b -> c c -> a }");
  CHECK_FALSE(m.systems[0].find_proposition("Shift")->map.is_idempotent());
}

TEST_CASE("valid corpus parses and round-trips") {
  const auto files = corpus("valid");
  CHECK(files.size() >= 20);
  auto all = files;
  for (const auto& p : bundled_models()) all.push_back(p);
  for (const auto& path : all) {
    CAPTURE(path.string());
    const std::string text = slurp(path);
    Model m;
    REQUIRE_NOTHROW(m = parse_model(text));
    const std::string printed = print_model(m.decl);
    const auto again = parse_model(printed);
    CHECK(again.decl == m.decl);
    CHECK(print_model(again.decl) == printed);
  }
}

TEST_CASE("invalid corpus reports the annotated position") {
  const auto files = corpus("invalid");
  CHECK(files.size() >= 10);
  const std::regex marker(R"(#\s*expect-error\s+(\d+):(\d+))");
  for (const auto& path : files) {
    CAPTURE(path.string());
    const std::string text = slurp(path);
    std::smatch match;
    REQUIRE(std::regex_search(text, match, marker));
    const auto e = parse_error_of(text);
    CHECK(e.line() == std::stoi(match[1]));
    CHECK(e.column() == std::stoi(match[2]));
  }
}

TEST_CASE("parser is total on random bytes") {
  std::mt19937 rng(61);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 200);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text(static_cast<std::size_t>(len(rng)), '\0');
    for (auto& c : text) c = static_cast<char>(byte(rng));
    CHECK(total(text));
  }
}

TEST_CASE("parser is total on mutated corpus texts") {
  std::vector<std::string> seeds;
  for (const auto& p : corpus("valid")) seeds.push_back(slurp(p));
  for (const auto& p : bundled_models()) seeds.push_back(slurp(p));
  const std::string alphabet = "{}:;,()->#ab01 \n\tsystemstatescomposeprepfixessendsmapbot";
  std::mt19937 rng(62);
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text = seeds[rng() % seeds.size()];
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < edits && !text.empty(); ++k) {
      const std::size_t at = rng() % text.size();
      switch (rng() % 4) {
        case 0:
          text.erase(at, 1 + rng() % 6);
          break;
        case 1:
          text.insert(at, 1, alphabet[rng() % alphabet.size()]);
          break;
        case 2:
          text[at] = alphabet[rng() % alphabet.size()];
          break;
        default: {
          const std::size_t from = rng() % text.size();
          text.insert(at, text.substr(from, 1 + rng() % 12));
        }
      }
    }
    CAPTURE(text);
    CHECK(total(text));
  }
}

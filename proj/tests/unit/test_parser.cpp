#include <doctest.h>

#include "test_util.hpp"
#include "worldforge/corpus.hpp"

using namespace worldforge;

TEST_CASE("minimal valid game parses to one object declaration") {
  auto r = parse(R"(
    game "mini" {
      task "Do nothing in particular."
      object agent : Agent
      win if in(agent, agent)
    }
  )");
  REQUIRE(r.ok());
  CHECK(r.def->gameName == "mini");
  CHECK(r.def->objectDecls.size() == 1);
  CHECK(r.def->winConditions.size() == 1);
  CHECK(validateSemantics(*r.def).empty());
}

TEST_CASE("unclosed block yields a diagnostic at the offending line") {
  auto r = parse("game \"g\" {\n  task \"t\"\n  object agent : Agent {\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics.front().line == 4);
  CHECK(r.diagnostics.front().message.find("unclosed") != std::string::npos);
}

TEST_CASE("parser never aborts and always reports a position") {
  for (const char* bad : {"", "game", "game \"x\"", "}", "game \"x\" {",
                          "game \"x\" { task }", "game 42 {}"}) {
    auto r = parse(bad);
    REQUIRE_FALSE(r.ok());
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics.front().line >= 1);
    CHECK(r.diagnostics.front().column >= 1);
  }
}

TEST_CASE("parse-print-parse is a fixpoint on every corpus game") {
  auto dir = wftest::corpusDir();
  for (const auto& entry : listCorpus(dir)) {
    CAPTURE(entry.name);
    auto first = parse(wftest::slurp(entry.gameFile));
    REQUIRE(first.ok());
    std::string printed = prettyPrint(*first.def);
    auto second = parse(printed);
    REQUIRE(second.ok());
    CHECK(*first.def == *second.def);
    // and printing is stable from there on
    CHECK(prettyPrint(*second.def) == printed);
  }
}

TEST_CASE("fixpoint holds for the fixture games too") {
  for (const char* name : {"alignment-fixture.wg"}) {
    auto first = parse(wftest::slurp(wftest::fixturesDir() / name));
    REQUIRE(first.ok());
    auto second = parse(prettyPrint(*first.def));
    REQUIRE(second.ok());
    CHECK(*first.def == *second.def);
  }
  auto mono = parse(wftest::slurp(wftest::corpusDir() / "boil-water" / "monolithic.wg"));
  REQUIRE(mono.ok());
  auto again = parse(prettyPrint(*mono.def));
  REQUIRE(again.ok());
  CHECK(*mono.def == *again.def);
}

TEST_CASE("expression printing preserves precedence and shape") {
  auto r = parse(R"(
    game "expr" {
      task "t"
      class Thing : GameObject { level = 0 }
      object agent : Agent
      object a : Thing
      object b : Thing
      win if a.level + b.level * 2 >= 4 and not (a.level == 3 or b.level < -1) score 2
      lose if exists t: Thing (t.level / 2 - 1 > 0 and in(t, agent))
    }
  )");
  REQUIRE(r.ok());
  auto again = parse(prettyPrint(*r.def));
  REQUIRE(again.ok());
  CHECK(*r.def == *again.def);
  CHECK(again.def->winConditions.front().scoreDelta == 2);
}

TEST_CASE("real literals round-trip through the printer") {
  auto r = parse(R"(
    game "reals" {
      task "t"
      object agent : Agent
      object w : Substance {
        solidName = "s" liquidName = "l" gasName = "g"
        meltingPoint = 0.5
        boilingPoint = 99.125
        temperature = -7.25
      }
      win if w.temperature >= 100.0
    }
  )");
  REQUIRE(r.ok());
  auto again = parse(prettyPrint(*r.def));
  REQUIRE(again.ok());
  CHECK(*r.def == *again.def);
}

TEST_CASE("semantic validation flags each violation with a position") {
  auto r = parse(R"(
    game "broken" {
      task "t"
      object agent : Agent
      object pot : Cookware
      object pot : Container
      object lid : Container { isOpen = 5 }
      action "rub {x:Container}" { say "ok" }
      action "rub {y:Container}" { say "twice" }
      action "wave {x:Ghost}" { say "boo" }
      win if pot.isShiny
    }
  )");
  REQUIRE(r.ok());
  auto diags = validateSemantics(*r.def);
  auto has = [&](const char* needle) {
    for (const auto& d : diags)
      if (d.message.find(needle) != std::string::npos) return true;
    return false;
  };
  CHECK(has("unknown class \"Cookware\""));
  CHECK(has("duplicate object name \"pot\""));
  CHECK(has("must be boolean"));
  CHECK(has("duplicate action pattern"));
  CHECK(has("unknown class \"Ghost\""));
  CHECK(has("unknown property \"isShiny\""));
  for (size_t i = 1; i < diags.size(); ++i) {
    bool ordered = diags[i - 1].line < diags[i].line ||
                   (diags[i - 1].line == diags[i].line &&
                    diags[i - 1].column <= diags[i].column);
    CHECK(ordered);
  }
}

TEST_CASE("missing win condition and missing substance fields are diagnosed") {
  auto r = parse(R"(
    game "nowin" {
      task "t"
      class Goo : Substance { solidName = "s" }
      object agent : Agent
    }
  )");
  REQUIRE(r.ok());
  auto diags = validateSemantics(*r.def);
  bool noWin = false, missing = false;
  for (const auto& d : diags) {
    noWin = noWin || d.message.find("no win condition") != std::string::npos;
    missing = missing || d.message.find("missing") != std::string::npos;
  }
  CHECK(noWin);
  CHECK(missing);
}

TEST_CASE("duplicate patterns collide with built-ins too") {
  auto r = parse(R"(
    game "dup" {
      task "t"
      object agent : Agent
      action "take {thing:GameObject}" { say "grabby" }
      win if in(agent, agent)
    }
  )");
  REQUIRE(r.ok());
  auto diags = validateSemantics(*r.def);
  REQUIRE_FALSE(diags.empty());
  CHECK(diags.front().message.find("duplicate action pattern") != std::string::npos);
}

TEST_CASE("meltingPoint must stay below boilingPoint") {
  auto r = parse(R"(
    game "swapped" {
      task "t"
      class Goo : Substance {
        solidName = "s" liquidName = "l" gasName = "g"
        meltingPoint = 100.0
        boilingPoint = 0.0
      }
      object agent : Agent
      object goo : Goo
      win if goo.temperature > 1.0
    }
  )");
  REQUIRE(r.ok());
  auto diags = validateSemantics(*r.def);
  REQUIRE_FALSE(diags.empty());
  CHECK(diags.front().message.find("meltingPoint") != std::string::npos);
}

TEST_CASE("all twenty malformed fixtures fail with the recorded line numbers") {
  struct Case {
    const char* file;
    int line;
  };
  static const Case cases[] = {
      {"m01.wg", 5},  {"m02.wg", 1},  {"m03.wg", 3},  {"m04.wg", 3},
      {"m05.wg", 3},  {"m06.wg", 2},  {"m07.wg", 3},  {"m08.wg", 5},
      {"m09.wg", 3},  {"m10.wg", 4},  {"m11.wg", 4},  {"m12.wg", 3},
      {"m13.wg", 3},  {"m14.wg", 5},  {"m15.wg", 5},  {"m16.wg", 4},
      {"m17.wg", 3},  {"m18.wg", 3},  {"m19.wg", 3},  {"m20.wg", 4},
  };
  for (const auto& c : cases) {
    CAPTURE(c.file);
    auto r = parse(wftest::slurp(wftest::fixturesDir() / "malformed" / c.file));
    REQUIRE_FALSE(r.ok());
    REQUIRE_FALSE(r.diagnostics.empty());
    CHECK(r.diagnostics.front().line == c.line);
  }
}

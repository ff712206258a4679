#include <doctest.h>

#include "test_util.hpp"
#include "worldforge/corpus.hpp"

using namespace worldforge;

TEST_CASE("listCorpus: six positive entries plus two negative fixtures, name-sorted") {
  auto entries = listCorpus(wftest::corpusDir());
  REQUIRE(entries.size() == 8);
  int negatives = 0;
  for (const auto& e : entries) negatives += e.isNegative() ? 1 : 0;
  CHECK(negatives == 2);
  for (size_t i = 1; i < entries.size(); ++i) CHECK(entries[i - 1].name < entries[i].name);
  CHECK(entries[1].name == "crashing-variant");
  CHECK(entries[5].name == "unwinnable-variant");
}

TEST_CASE("loadEntry: boil-water parses and its spec loads clean") {
  auto loaded = loadEntry(wftest::corpusDir(), "boil-water");
  CHECK(loaded.def.gameName == "boil-water");
  CHECK_FALSE(loaded.spec.taskCriticalObjects.empty());
  CHECK(loaded.transcript.expectWon);
  CHECK(loaded.transcript.expectScore == 1);
}

TEST_CASE("loadEntry: unknown names raise CorpusError") {
  CHECK_THROWS_AS(loadEntry(wftest::corpusDir(), "no-such-game"), CorpusError);
}

TEST_CASE("listCorpus: missing directory raises CorpusError") {
  CHECK_THROWS_AS(listCorpus(wftest::corpusDir() / "nowhere"), CorpusError);
}

TEST_CASE("every positive entry replays its golden transcript to a win") {
  for (const auto& entry : listCorpus(wftest::corpusDir())) {
    if (entry.isNegative()) continue;
    CAPTURE(entry.name);
    auto loaded = loadEntry(wftest::corpusDir(), entry.name);
    REQUIRE_FALSE(loaded.transcript.commands.empty());
    CHECK(loaded.transcript.commands.size() <= 15);

    Game game = Game::compile(loaded.def);
    GameState s = game.instantiate(42);
    for (const auto& cmd : loaded.transcript.commands) {
      // every golden command must be grounded at its step
      bool grounded = false;
      for (const auto& a : game.enumerateValidActions(s))
        grounded = grounded || normalizeCommand(a) == normalizeCommand(cmd);
      CAPTURE(cmd);
      CHECK(grounded);
      auto r = game.step(s, cmd);
      s = std::move(r.state);
    }
    CHECK(s.gameWon == loaded.transcript.expectWon);
    CHECK(s.score == loaded.transcript.expectScore);
    CHECK(s.score == s.maxScore);
  }
}

TEST_CASE("every positive entry declares at least one distractor") {
  for (const auto& entry : listCorpus(wftest::corpusDir())) {
    if (entry.isNegative()) continue;
    CAPTURE(entry.name);
    auto loaded = loadEntry(wftest::corpusDir(), entry.name);
    CHECK_FALSE(loaded.spec.distractors.empty());
  }
}

TEST_CASE("transcript parsing understands the EXPECT trailer") {
  Transcript t = parseTranscript("look around\nwait\nEXPECT won score=3\nignored\n");
  REQUIRE(t.commands.size() == 2);
  CHECK(t.commands[1] == "wait");
  CHECK(t.expectWon);
  CHECK(t.expectScore == 3);
}

#include <doctest.h>

#include <cstdio>

#include "test_util.hpp"
#include "worldforge/corpus.hpp"
#include "worldforge/task_spec.hpp"

using namespace worldforge;

TEST_CASE("normalizeName: spec examples") {
  CHECK(normalizeName("Dish_Soap") == "dish soap");
  CHECK(normalizeName("dishes") == "dishe");
  CHECK(normalizeName("Dishes ") == "dishe");
  CHECK(normalizeName("dishes") == normalizeName("Dishes "));
  // "gas" has length 3, so its trailing 's' survives
  CHECK(normalizeName("GAS stove!") == "gas stove");
  CHECK(normalizeName("logs") == "log");
  CHECK(normalizeName("") == "");
  CHECK(normalizeName("   ") == "");
}

TEST_CASE("normalizeName is idempotent on awkward words and random junk") {
  for (const char* w : {"glass", "boss", "ssss", "mess kit", "Chess-Sets", "s s s"})
    CHECK(normalizeName(normalizeName(w)) == normalizeName(w));

  // hand-rolled generator over a printable alphabet
  std::uint64_t rng = 1234567;
  const std::string alphabet = "abcsSz AB_09!.-";
  for (int i = 0; i < 300; ++i) {
    std::string input;
    rng = rng * 6364136223846793005ULL + 1442695040888963407ULL;
    int length = static_cast<int>((rng >> 40) % 24);
    for (int k = 0; k < length; ++k) {
      rng = rng * 6364136223846793005ULL + 1442695040888963407ULL;
      input += alphabet[(rng >> 33) % alphabet.size()];
    }
    CAPTURE(input);
    CHECK(normalizeName(normalizeName(input)) == normalizeName(input));
  }
}

TEST_CASE("wash-dishes spec file loads with the expected objects") {
  auto spec = loadSpec(wftest::corpusDir() / "wash-dishes" / "spec.spec.json");
  REQUIRE(spec.taskCriticalObjects.size() == 3);
  CHECK(spec.taskCriticalObjects[0] == "dishes");
  CHECK(spec.taskCriticalObjects[1] == "dish soap");
  CHECK(spec.taskCriticalObjects[2] == "dishwasher");
}

TEST_CASE("spec schema violations name the offending field") {
  auto fieldOf = [](const std::string& text) {
    try {
      parseSpecJson(text);
      return std::string("<none>");
    } catch (const SpecFormatError& e) {
      return e.field;
    }
  };
  CHECK(fieldOf(R"({"taskCriticalObjects":["x"],"actions":[],"distractors":[],"solutionSketch":["s"]})") ==
        "taskDescription");
  CHECK(fieldOf(R"({"taskDescription":"t","taskCriticalObjects":[],"actions":[],"distractors":[],"solutionSketch":["s"]})") ==
        "taskCriticalObjects");
  CHECK(fieldOf(R"({"taskDescription":"t","taskCriticalObjects":["x"],"actions":[],"distractors":[],"solutionSketch":[]})") ==
        "solutionSketch");
  CHECK(fieldOf(R"({"taskDescription":"t","taskCriticalObjects":["x"],"actions":[],"distractors":[],"solutionSketch":["s"],"extra":1})") ==
        "extra");
  CHECK(fieldOf(R"({"taskDescription":"t","taskCriticalObjects":["Dish","dish"],"actions":[],"distractors":[],"solutionSketch":["s"]})") ==
        "taskCriticalObjects"); // duplicates after normalization
  CHECK(fieldOf("not json at all") == "<root>");
  CHECK(fieldOf(R"({"taskDescription":"t","taskCriticalObjects":"x","actions":[],"distractors":[],"solutionSketch":["s"]})") ==
        "taskCriticalObjects");
}

TEST_CASE("save/load is the identity on every corpus spec") {
  auto tmp = std::filesystem::temp_directory_path() / "wf-spec-roundtrip.spec.json";
  for (const auto& entry : listCorpus(wftest::corpusDir())) {
    CAPTURE(entry.name);
    auto spec = loadSpec(entry.specFile);
    saveSpec(spec, tmp);
    CHECK(loadSpec(tmp) == spec);
    // canonical form is byte-stable
    CHECK(specToJson(loadSpec(tmp)) == specToJson(spec));
  }
  std::remove(tmp.string().c_str());
}

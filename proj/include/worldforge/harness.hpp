#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "worldforge/engine.hpp"
#include "worldforge/task_spec.hpp"

namespace worldforge {

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

struct FaultRecord {
  std::string actionText;           // "<parse>"/"<validate>"/"<init>" for init failures
  std::string reason;
  std::vector<std::string> sequence; // actions leading to the fault, fault action last
};

struct ValidityReport {
  bool initOk = false;
  bool validActionsOk = false;
  bool runnableOk = false;
  std::vector<FaultRecord> faults; // empty iff runnableOk
};

struct CompliancePair {
  int matched = 0;
  int total = 0;
};

struct ComplianceVerdict {
  std::string entry;
  bool matched = false;
  std::string matchedAgainst; // the def-side name it matched, when any
};

struct ComplianceReport {
  CompliancePair objects, actions, distractors;
  std::vector<ComplianceVerdict> objectVerdicts, actionVerdicts, distractorVerdicts;
};

struct WinnabilityResult {
  bool winnable = false;
  std::vector<std::string> plan; // shortest plan found (empty if already won)
  std::int64_t nodesExpanded = 0;
  bool budgetExhausted = false;  // true => a "not winnable" verdict is inconclusive
};

struct AlignmentReport {
  int judgedTransitions = 0;
  int alignedCount = 0;
  int judgeFailures = 0; // excluded from the denominator
  double score = 1.0;    // alignedCount / judgedTransitions; 1.0 when nothing judged
  std::vector<std::string> justifications;
  int histogramBin = 9;  // floor(score*10) capped at 9
};

struct PhaseClock {
  double validitySec = 0, complianceSec = 0, winnabilitySec = 0, alignmentSec = 0;
};

inline constexpr const char* kHarnessVersion = "0.1.0";

struct EvalReport {
  std::string gameId;
  ValidityReport validity;
  ComplianceReport compliance;
  WinnabilityResult winnability;
  AlignmentReport alignment;
  PhaseClock wallClock; // in-memory only; never serialized (reports stay byte-deterministic)
  std::uint64_t seed = 0;
  std::string harnessVersion = kHarnessVersion;
};

struct CorpusEvalResult {
  std::vector<EvalReport> reports; // game-name order
  double initFraction = 0, validActionsFraction = 0, runnableFraction = 0;
  double meanObjectCompliance = 0, meanActionCompliance = 0, meanDistractorCompliance = 0;
  double distractorsAllMatchedFraction = 0;
  double winnableFraction = 0;
  double meanAlignment = 0;
  std::vector<int> histogram = std::vector<int>(10, 0); // alignment scores, 10 bins on [0,1]
  std::uint64_t seed = 0;
};

std::string validityToJson(const ValidityReport& r);
std::string evalReportToJson(const EvalReport& r);
std::string corpusSummaryToJson(const CorpusEvalResult& r);
std::string histogramToCsv(const std::vector<int>& bins); // bin_low,bin_high,count

// ---------------------------------------------------------------------------
// Judges
// ---------------------------------------------------------------------------

struct Transition {
  std::string before;
  std::string action;
  std::string after;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

struct Judgment {
  bool aligned = true;
  std::string justification;
};

class Judge {
public:
  virtual ~Judge() = default;
  // May throw JudgeError; the harness records the failure and moves on.
  virtual Judgment judge(const Transition& t) = 0;
  virtual std::string name() const = 0;
  // Judges declaring a serial contract force corpus evaluation to one worker.
  virtual bool concurrentSafe() const { return true; }
};

class MockJudge final : public Judge {
public:
  explicit MockJudge(bool aligned) : aligned_(aligned) {}
  Judgment judge(const Transition&) override;
  std::string name() const override { return aligned_ ? "mock:aligned" : "mock:misaligned"; }
private:
  bool aligned_;
};

// Marks a transition misaligned when its action contains the needle; the
// test double for judges keyed to specific physical violations.
class ScriptedJudge final : public Judge {
public:
  explicit ScriptedJudge(std::string misalignedNeedle)
      : needle_(std::move(misalignedNeedle)) {}
  Judgment judge(const Transition& t) override;
  std::string name() const override { return "scripted:" + needle_; }
private:
  std::string needle_;
};

// ---------------------------------------------------------------------------
// The four evaluation dimensions
// ---------------------------------------------------------------------------

// Technical validity: parse/validate/instantiate/describe (initOk), action
// enumeration covering all ten built-in verbs (validActionsOk), and
// fault-free exploration of every action sequence up to `depth`, expanding
// at most branchCap actions per state (all of them, in deterministic order,
// when the branching factor fits; a seeded uniform sample otherwise).
ValidityReport checkValidity(const std::string& source, int depth = 3,
                             int branchCap = 100, std::uint64_t seed = 42);

// Name matching per normalizeName: spec objects against class and object
// names, spec actions against action verbs, distractors against both.
ComplianceReport checkCompliance(const GameDef& def, const TaskSpecification& spec);

// Breadth-first search over canonical state bytes (search mode) with a
// visited set; expansion follows enumerateValidActions order, so the first
// plan found is the shortest. Crashing branches are pruned and never count
// as wins. Any returned plan has been machine-replayed to gameWon=true.
WinnabilityResult searchWinnable(const Game& game, int maxDepth = 20,
                                 std::int64_t nodeBudget = 200000,
                                 std::uint64_t seed = 42);
WinnabilityResult searchWinnable(const GameDef& def, int maxDepth = 20,
                                 std::int64_t nodeBudget = 200000,
                                 std::uint64_t seed = 42);

// Samples up to `trajectories` seeded random trajectories of length <= depth,
// deduplicates (before, action, after) triples, judges each once in
// first-seen order.
AlignmentReport sampleAlignment(const Game& game, Judge& judge,
                                int trajectories = 100, int depth = 3,
                                std::uint64_t seed = 42);

// All four dimensions for one game.
EvalReport evaluateGame(const std::string& source, const TaskSpecification& spec,
                        Judge& judge, std::uint64_t seed,
                        const std::string& gameId = "game");

// Evaluates every corpus entry against its own spec, in parallel when
// jobs > 1; aggregation merges in name order so output bytes never depend
// on scheduling. Writes per-game reports, corpus-summary.json and
// histogram.csv under outDir when given.
CorpusEvalResult evaluateCorpus(const std::filesystem::path& corpusDir, Judge& judge,
                                std::uint64_t seed,
                                const std::optional<std::filesystem::path>& outDir,
                                int jobs = 1);

} // namespace worldforge

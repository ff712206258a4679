#include "worldforge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "worldforge/corpus.hpp"
#include "worldforge/parser.hpp"
#include "worldforge/semantics.hpp"

namespace worldforge {

using nlohmann::json;

namespace {

// Deterministic cross-platform RNG (splitmix64) with an unbiased-enough
// bounded draw; std::uniform_int_distribution is implementation-defined.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }
};

double secondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

Judgment MockJudge::judge(const Transition&) {
  return {aligned_, aligned_ ? "consistent with everyday physics"
                             : "inconsistent with everyday physics"};
}

Judgment ScriptedJudge::judge(const Transition& t) {
  if (t.action.find(needle_) != std::string::npos)
    return {false, "places an item into a closed container"};
  return {true, "consistent with everyday physics"};
}

// ---------------------------------------------------------------------------
// Technical validity
// ---------------------------------------------------------------------------

ValidityReport checkValidity(const std::string& source, int depth, int branchCap,
                             std::uint64_t seed) {
  ValidityReport report;
  auto initFailure = [&](const char* phase, const std::string& reason) {
    report.faults.push_back({phase, reason, {}});
    return report;
  };

  ParseResult parsed = parse(source);
  if (!parsed.ok())
    return initFailure("<parse>", formatDiagnostic(parsed.diagnostics.front()));
  auto diags = validateSemantics(*parsed.def);
  if (!diags.empty())
    return initFailure("<validate>", formatDiagnostic(diags.front()));

  Game game = Game::compile(std::move(*parsed.def));
  GameState initial;
  try {
    initial = game.instantiate(seed);
    game.makeDescription(initial);
  } catch (const InstantiationFault& f) {
    return initFailure("<init>", f.what());
  } catch (const RuntimeFault& f) {
    return initFailure("<init>", f.what());
  }
  report.initOk = true;

  {
    std::vector<GroundedAction> grounded = game.groundActions(initial);
    std::set<int> builtinsSeen;
    for (const auto& g : grounded) {
      const ActionEntry& e = game.actions().at(static_cast<size_t>(g.entryIndex));
      if (e.builtin >= 0) builtinsSeen.insert(e.builtin);
    }
    report.validActionsOk =
        !grounded.empty() && static_cast<int>(builtinsSeen.size()) == kBuiltinCount;
  }

  // Level-by-level exploration of every action sequence of length <= depth.
  struct Node {
    GameState state;
    std::vector<std::string> seq;
  };
  Rng rng(seed);
  std::set<std::pair<std::string, std::string>> seenFaults;
  std::vector<Node> level;
  level.push_back({initial, {}});
  for (int d = 1; d <= depth; ++d) {
    std::vector<Node> next;
    for (const Node& node : level) {
      std::vector<GroundedAction> grounded = game.groundActions(node.state);
      std::vector<std::size_t> chosen;
      if (static_cast<int>(grounded.size()) <= branchCap) {
        chosen.resize(grounded.size());
        for (std::size_t i = 0; i < grounded.size(); ++i) chosen[i] = i;
      } else {
        // Partial Fisher-Yates, then ascending order for stable expansion.
        std::vector<std::size_t> idx(grounded.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (int k = 0; k < branchCap; ++k) {
          std::size_t j = k + rng.below(idx.size() - static_cast<std::size_t>(k));
          std::swap(idx[static_cast<std::size_t>(k)], idx[j]);
        }
        chosen.assign(idx.begin(), idx.begin() + branchCap);
        std::sort(chosen.begin(), chosen.end());
      }
      for (std::size_t i : chosen) {
        const GroundedAction& g = grounded[i];
        try {
          StepResult r = game.stepGrounded(node.state, g);
          if (d < depth) {
            Node child{std::move(r.state), node.seq};
            child.seq.push_back(g.text);
            next.push_back(std::move(child));
          }
        } catch (const RuntimeFault& f) {
          if (seenFaults.emplace(g.text, f.reason).second) {
            FaultRecord rec{g.text, f.reason, node.seq};
            rec.sequence.push_back(g.text);
            report.faults.push_back(std::move(rec));
          }
        }
      }
    }
    level = std::move(next);
  }
  report.runnableOk = report.faults.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Specification compliance
// ---------------------------------------------------------------------------

ComplianceReport checkCompliance(const GameDef& def, const TaskSpecification& spec) {
  std::vector<std::pair<std::string, std::string>> objectSide; // normalized -> original
  for (const auto& c : def.classDecls)
    objectSide.emplace_back(normalizeName(c.name), c.name);
  for (const auto& o : def.objectDecls) {
    objectSide.emplace_back(normalizeName(o.name), o.name);
    for (const auto& a : o.assigns)
      if (a.key == "name" && std::holds_alternative<std::string>(a.value))
        objectSide.emplace_back(normalizeName(std::get<std::string>(a.value)),
                                std::get<std::string>(a.value));
  }
  std::vector<std::pair<std::string, std::string>> verbSide;
  for (auto v : {"look around", "look at", "inventory", "take", "put", "open",
                 "close", "turn on", "turn off", "wait"})
    verbSide.emplace_back(normalizeName(v), v);
  for (const auto& a : def.actionDecls)
    verbSide.emplace_back(normalizeName(a.verb()), a.verb());

  auto matchIn = [](const std::vector<std::pair<std::string, std::string>>& side,
                    const std::string& normalized) -> const std::string* {
    for (const auto& [norm, original] : side)
      if (norm == normalized) return &original;
    return nullptr;
  };

  ComplianceReport report;
  auto grade = [&](const std::vector<std::string>& entries, bool objects, bool verbs,
                   CompliancePair& pair, std::vector<ComplianceVerdict>& verdicts) {
    pair.total = static_cast<int>(entries.size());
    for (const auto& entry : entries) {
      std::string norm = normalizeName(entry);
      const std::string* hit = nullptr;
      if (objects) hit = matchIn(objectSide, norm);
      if (!hit && verbs) hit = matchIn(verbSide, norm);
      verdicts.push_back({entry, hit != nullptr, hit ? *hit : ""});
      if (hit) ++pair.matched;
    }
  };
  grade(spec.taskCriticalObjects, true, false, report.objects, report.objectVerdicts);
  grade(spec.actions, false, true, report.actions, report.actionVerdicts);
  grade(spec.distractors, true, true, report.distractors, report.distractorVerdicts);
  return report;
}

// ---------------------------------------------------------------------------
// Winnability
// ---------------------------------------------------------------------------

WinnabilityResult searchWinnable(const Game& game, int maxDepth,
                                 std::int64_t nodeBudget, std::uint64_t seed) {
  WinnabilityResult result;
  GameState initial = game.instantiate(seed);
  if (initial.gameWon) {
    result.winnable = true;
    return result;
  }

  struct Node {
    GameState state;
    int parent = -1;
    std::string action;
    int depth = 0;
  };
  std::vector<Node> nodes;
  nodes.push_back({initial, -1, "", 0});
  std::unordered_set<std::string> visited;
  visited.insert(canonicalSerialize(initial, SerializeMode::Search));

  std::size_t head = 0;
  int goal = -1;
  while (head < nodes.size()) {
    if (result.nodesExpanded >= nodeBudget) {
      result.budgetExhausted = true;
      break;
    }
    // Copy, not reference: expanding may reallocate `nodes`.
    const GameState current = nodes[head].state;
    const int currentIndex = static_cast<int>(head);
    const int currentDepth = nodes[head].depth;
    ++head;
    ++result.nodesExpanded;
    if (currentDepth >= maxDepth) continue;

    for (const GroundedAction& g : game.groundActions(current)) {
      StepResult r;
      try {
        r = game.stepGrounded(current, g);
      } catch (const RuntimeFault&) {
        continue; // crashing branch: pruned, never a win
      }
      std::string key = canonicalSerialize(r.state, SerializeMode::Search);
      if (!visited.insert(std::move(key)).second) continue;
      nodes.push_back({std::move(r.state), currentIndex, g.text, currentDepth + 1});
      if (nodes.back().state.gameWon) {
        goal = static_cast<int>(nodes.size()) - 1;
        break;
      }
    }
    if (goal >= 0) break;
  }

  if (goal < 0) return result;
  result.winnable = true;
  for (int at = goal; at > 0; at = nodes[at].parent)
    result.plan.push_back(nodes[at].action);
  std::reverse(result.plan.begin(), result.plan.end());

  // Machine-check: the plan must actually replay to a win.
  GameState replay = game.instantiate(seed);
  for (const auto& action : result.plan) {
    StepResult r = game.step(replay, action);
    replay = std::move(r.state);
  }
  if (!replay.gameWon)
    throw std::logic_error("searchWinnable: plan failed machine replay");
  return result;
}

WinnabilityResult searchWinnable(const GameDef& def, int maxDepth,
                                 std::int64_t nodeBudget, std::uint64_t seed) {
  return searchWinnable(Game::compile(def), maxDepth, nodeBudget, seed);
}

// ---------------------------------------------------------------------------
// Physical reality alignment
// ---------------------------------------------------------------------------

AlignmentReport sampleAlignment(const Game& game, Judge& judge, int trajectories,
                                int depth, std::uint64_t seed) {
  AlignmentReport report;
  GameState initial = game.instantiate(seed);
  Rng rng(seed);

  std::vector<Transition> unique;
  std::set<Transition> seen;
  for (int t = 0; t < trajectories; ++t) {
    GameState state = initial;
    for (int d = 0; d < depth; ++d) {
      std::vector<GroundedAction> grounded = game.groundActions(state);
      if (grounded.empty()) break;
      const GroundedAction& g = grounded[rng.below(grounded.size())];
      std::string before = game.makeDescription(state);
      StepResult r;
      try {
        r = game.stepGrounded(state, g);
      } catch (const RuntimeFault&) {
        break; // crashed transition: trajectory ends, nothing to judge
      }
      Transition tr{std::move(before), g.text, game.makeDescription(r.state)};
      if (seen.insert(tr).second) unique.push_back(tr);
      state = std::move(r.state);
    }
  }

  for (const Transition& tr : unique) {
    try {
      Judgment j = judge.judge(tr);
      if (j.aligned) ++report.alignedCount;
      ++report.judgedTransitions;
      report.justifications.push_back((j.aligned ? "[aligned] " : "[misaligned] ") +
                                      tr.action + ": " + j.justification);
    } catch (const JudgeError& e) {
      ++report.judgeFailures;
      report.justifications.push_back("[judge failure] " + tr.action + ": " + e.what());
    }
  }
  report.score = report.judgedTransitions == 0
                     ? 1.0
                     : static_cast<double>(report.alignedCount) /
                           static_cast<double>(report.judgedTransitions);
  report.histogramBin = std::min(9, static_cast<int>(report.score * 10.0));
  return report;
}

// ---------------------------------------------------------------------------
// Whole-game and corpus evaluation
// ---------------------------------------------------------------------------

EvalReport evaluateGame(const std::string& source, const TaskSpecification& spec,
                        Judge& judge, std::uint64_t seed, const std::string& gameId) {
  EvalReport report;
  report.gameId = gameId;
  report.seed = seed;

  auto t0 = std::chrono::steady_clock::now();
  report.validity = checkValidity(source, 3, 100, seed);
  report.wallClock.validitySec = secondsSince(t0);

  ParseResult parsed = parse(source);
  t0 = std::chrono::steady_clock::now();
  if (parsed.ok()) {
    report.compliance = checkCompliance(*parsed.def, spec);
  } else {
    report.compliance.objects.total = static_cast<int>(spec.taskCriticalObjects.size());
    report.compliance.actions.total = static_cast<int>(spec.actions.size());
    report.compliance.distractors.total = static_cast<int>(spec.distractors.size());
  }
  report.wallClock.complianceSec = secondsSince(t0);

  if (report.validity.initOk && parsed.ok()) {
    Game game = Game::compile(std::move(*parsed.def));
    t0 = std::chrono::steady_clock::now();
    report.winnability = searchWinnable(game, 20, 200000, seed);
    report.wallClock.winnabilitySec = secondsSince(t0);
    t0 = std::chrono::steady_clock::now();
    report.alignment = sampleAlignment(game, judge, 100, 3, seed);
    report.wallClock.alignmentSec = secondsSince(t0);
  } else {
    report.alignment.judgedTransitions = 0;
    report.alignment.score = 0.0;
    report.alignment.histogramBin = 0;
  }
  return report;
}

CorpusEvalResult evaluateCorpus(const std::filesystem::path& corpusDir, Judge& judge,
                                std::uint64_t seed,
                                const std::optional<std::filesystem::path>& outDir,
                                int jobs) {
  std::vector<CorpusEntry> entries = listCorpus(corpusDir); // already name-sorted
  CorpusEvalResult result;
  result.seed = seed;
  result.reports.resize(entries.size());

  auto evalOne = [&](std::size_t i) {
    LoadedEntry loaded = loadEntry(corpusDir, entries[i].name);
    result.reports[i] =
        evaluateGame(loaded.source, loaded.spec, judge, seed, entries[i].name);
  };

  if (jobs > 1 && judge.concurrentSafe()) {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> cursor{0};
    int workers = std::min<int>(jobs, static_cast<int>(entries.size()));
    for (int w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&]() {
        for (std::size_t i = cursor.fetch_add(1); i < entries.size();
             i = cursor.fetch_add(1))
          evalOne(i);
      }));
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t i = 0; i < entries.size(); ++i) evalOne(i);
  }

  double n = static_cast<double>(result.reports.size());
  auto fraction = [&](auto pred) {
    int hits = 0;
    for (const auto& r : result.reports)
      if (pred(r)) ++hits;
    return n == 0 ? 0.0 : hits / n;
  };
  auto pairFraction = [](const CompliancePair& p) {
    return p.total == 0 ? 1.0 : static_cast<double>(p.matched) / p.total;
  };
  result.initFraction = fraction([](const EvalReport& r) { return r.validity.initOk; });
  result.validActionsFraction =
      fraction([](const EvalReport& r) { return r.validity.validActionsOk; });
  result.runnableFraction =
      fraction([](const EvalReport& r) { return r.validity.runnableOk; });
  result.winnableFraction =
      fraction([](const EvalReport& r) { return r.winnability.winnable; });
  result.distractorsAllMatchedFraction = fraction([](const EvalReport& r) {
    return r.compliance.distractors.matched == r.compliance.distractors.total;
  });
  for (const auto& r : result.reports) {
    result.meanObjectCompliance += pairFraction(r.compliance.objects) / n;
    result.meanActionCompliance += pairFraction(r.compliance.actions) / n;
    result.meanDistractorCompliance += pairFraction(r.compliance.distractors) / n;
    result.meanAlignment += r.alignment.score / n;
    result.histogram[static_cast<size_t>(r.alignment.histogramBin)] += 1;
  }

  if (outDir) {
    std::filesystem::create_directories(*outDir);
    for (const auto& r : result.reports) {
      std::ofstream out(*outDir / (r.gameId + ".report.json"), std::ios::binary);
      out << evalReportToJson(r);
    }
    std::ofstream summary(*outDir / "corpus-summary.json", std::ios::binary);
    summary << corpusSummaryToJson(result);
    std::ofstream csv(*outDir / "histogram.csv", std::ios::binary);
    csv << histogramToCsv(result.histogram);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json toJson(const ValidityReport& r) {
  json j;
  j["initOk"] = r.initOk;
  j["validActionsOk"] = r.validActionsOk;
  j["runnableOk"] = r.runnableOk;
  j["faults"] = json::array();
  for (const auto& f : r.faults)
    j["faults"].push_back(
        {{"action", f.actionText}, {"reason", f.reason}, {"sequence", f.sequence}});
  return j;
}

json toJson(const CompliancePair& p, const std::vector<ComplianceVerdict>& verdicts) {
  json j;
  j["matched"] = p.matched;
  j["total"] = p.total;
  j["verdicts"] = json::array();
  for (const auto& v : verdicts)
    j["verdicts"].push_back(
        {{"entry", v.entry}, {"matched", v.matched}, {"matchedAgainst", v.matchedAgainst}});
  return j;
}

json toJson(const EvalReport& r) {
  json j;
  j["gameId"] = r.gameId;
  j["seed"] = r.seed;
  j["harnessVersion"] = r.harnessVersion;
  j["validity"] = toJson(r.validity);
  j["compliance"] = {
      {"objects", toJson(r.compliance.objects, r.compliance.objectVerdicts)},
      {"actions", toJson(r.compliance.actions, r.compliance.actionVerdicts)},
      {"distractors", toJson(r.compliance.distractors, r.compliance.distractorVerdicts)}};
  j["winnability"] = {{"winnable", r.winnability.winnable},
                      {"plan", r.winnability.plan},
                      {"nodesExpanded", r.winnability.nodesExpanded},
                      {"budgetExhausted", r.winnability.budgetExhausted}};
  j["alignment"] = {{"judgedTransitions", r.alignment.judgedTransitions},
                    {"alignedCount", r.alignment.alignedCount},
                    {"judgeFailures", r.alignment.judgeFailures},
                    {"score", r.alignment.score},
                    {"histogramBin", r.alignment.histogramBin},
                    {"justifications", r.alignment.justifications}};
  return j;
}

} // namespace

std::string validityToJson(const ValidityReport& r) { return toJson(r).dump(2) + "\n"; }

std::string evalReportToJson(const EvalReport& r) { return toJson(r).dump(2) + "\n"; }

std::string corpusSummaryToJson(const CorpusEvalResult& r) {
  json j;
  j["seed"] = r.seed;
  j["harnessVersion"] = kHarnessVersion;
  json games = json::array();
  for (const auto& rep : r.reports) games.push_back(rep.gameId);
  j["games"] = games;
  j["validity"] = {{"initFraction", r.initFraction},
                   {"validActionsFraction", r.validActionsFraction},
                   {"runnableFraction", r.runnableFraction}};
  j["compliance"] = {{"meanObjectFraction", r.meanObjectCompliance},
                     {"meanActionFraction", r.meanActionCompliance},
                     {"meanDistractorFraction", r.meanDistractorCompliance},
                     {"distractorsAllMatchedFraction", r.distractorsAllMatchedFraction}};
  j["winnableFraction"] = r.winnableFraction;
  j["meanAlignment"] = r.meanAlignment;
  j["alignmentHistogram"] = r.histogram;
  return j.dump(2) + "\n";
}

std::string histogramToCsv(const std::vector<int>& bins) {
  std::string out = "bin_low,bin_high,count\n";
  for (size_t i = 0; i < bins.size(); ++i) {
    out += formatReal(static_cast<double>(i) / 10.0) + "," +
           formatReal(static_cast<double>(i + 1) / 10.0) + "," +
           std::to_string(bins[i]) + "\n";
  }
  return out;
}

} // namespace worldforge

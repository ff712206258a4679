#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "worldforge/corpus.hpp"
#include "worldforge/engine.hpp"
#include "worldforge/genloop.hpp"
#include "worldforge/harness.hpp"
#include "worldforge/parser.hpp"
#include "worldforge/semantics.hpp"
#include "worldforge/stats.hpp"

namespace fs = std::filesystem;
using namespace worldforge;

namespace {

// Exit statuses: 0 success, 1 evaluation found failures, 2 usage error,
// 3 I/O or corpus error, 4 LLM client error.
enum ExitStatus { kOk = 0, kFailures = 1, kUsage = 2, kIoError = 3, kLlmError = 4 };

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses and validates a game file; diagnostics go to stderr.
Game loadGame(const fs::path& path, std::string* sourceOut = nullptr) {
  std::string source = slurp(path);
  ParseResult parsed = parse(source);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics)
      std::cerr << path.string() << ": " << formatDiagnostic(d) << "\n";
    throw IoFailure("game failed to parse: " + path.string());
  }
  auto diags = validateSemantics(*parsed.def);
  if (!diags.empty()) {
    for (const auto& d : diags)
      std::cerr << path.string() << ": " << formatDiagnostic(d) << "\n";
    throw IoFailure("game failed validation: " + path.string());
  }
  if (sourceOut) *sourceOut = std::move(source);
  return Game::compile(std::move(*parsed.def));
}

int runPlay(const fs::path& gamePath, std::uint64_t seed) {
  Game game = loadGame(gamePath);
  GameState state = game.instantiate(seed);
  std::cout << state.taskDescription << "\n\n"
            << game.makeDescription(state) << "\n\n"
            << "(type 'help' for commands, 'score' for progress, 'quit' to leave)\n";
  if (state.gameOver) {
    std::cout << (state.gameWon ? "You have already won!\n" : "The game is over.\n");
    return kOk;
  }
  std::string line;
  while (true) {
    std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::string cmd = normalizeCommand(line);
    if (cmd.empty()) continue;
    if (cmd == "quit") break;
    if (cmd == "score") {
      std::cout << "score: " << state.score << " / " << state.maxScore
                << " (steps: " << state.numSteps << ")\n";
      continue;
    }
    if (cmd == "help") {
      std::cout << "valid commands:\n";
      for (const auto& a : game.enumerateValidActions(state)) std::cout << "  " << a << "\n";
      std::cout << "meta commands: help, score, quit\n";
      continue;
    }
    try {
      StepResult r = game.step(state, cmd);
      state = std::move(r.state);
      std::cout << r.observation << "\n";
    } catch (const RuntimeFault& f) {
      std::cout << "The game faulted: " << f.reason << "\n";
      continue;
    }
    if (state.gameOver) {
      std::cout << (state.gameWon ? "*** You won! ***" : "*** Game over. ***")
                << " Final score: " << state.score << " / " << state.maxScore << "\n";
      break;
    }
  }
  return kOk;
}

int runSolution(const fs::path& gamePath, const fs::path& solutionPath,
                std::uint64_t seed) {
  Game game = loadGame(gamePath);
  Transcript t = parseTranscript(slurp(solutionPath));
  GameState state = game.instantiate(seed);
  for (const auto& cmd : t.commands) {
    StepResult r = game.step(state, cmd);
    state = std::move(r.state);
    std::cout << "> " << cmd << "\n" << r.observation << "\n";
  }
  bool pass = state.gameWon == t.expectWon && state.score == t.expectScore;
  std::cout << "RESULT won=" << (state.gameWon ? "true" : "false")
            << " score=" << state.score << " expected won="
            << (t.expectWon ? "true" : "false") << " score=" << t.expectScore
            << (pass ? " [ok]" : " [mismatch]") << "\n";
  return pass ? kOk : kFailures;
}

std::unique_ptr<Judge> makeJudge(const std::string& name, const std::string& configPath,
                                 std::unique_ptr<ModelClient>& clientOut) {
  if (name == "mock:aligned") return std::make_unique<MockJudge>(true);
  if (name == "mock:misaligned") return std::make_unique<MockJudge>(false);
  if (name == "llm") {
    if (configPath.empty())
      throw CLI::ValidationError("--judge llm requires --config <client.json>");
    clientOut = std::make_unique<HttpModelClient>();
    return std::make_unique<LlmJudge>(loadClientConfig(configPath), *clientOut);
  }
  throw CLI::ValidationError("unknown judge \"" + name +
                             "\" (expected mock:aligned, mock:misaligned, or llm)");
}

bool reportClean(const EvalReport& r) {
  return r.validity.initOk && r.validity.validActionsOk && r.validity.runnableOk &&
         r.winnability.winnable;
}

void printPhaseClocks(const EvalReport& r) {
  std::cerr << r.gameId << ": validity " << r.wallClock.validitySec
            << "s, compliance " << r.wallClock.complianceSec << "s, winnability "
            << r.wallClock.winnabilitySec << "s, alignment "
            << r.wallClock.alignmentSec << "s\n";
}

std::string timestampDir() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&tt));
  return std::string("runs/") + buf;
}

PromptBundle makeBundle(const fs::path& specPath, const fs::path& corpusDir,
                        const std::string& exampleName, const std::string& engineDocPath) {
  PromptBundle bundle;
  bundle.engineDoc = engineDocPath.empty() ? engineDocText() : slurp(engineDocPath);
  LoadedEntry example = loadEntry(corpusDir, exampleName);
  bundle.exampleGameSource = example.source;
  bundle.targetSpec = loadSpec(specPath);
  bundle.instruction =
      "Write a complete game in the game language documented above that satisfies "
      "the target task specification. Declare every task-critical object, include "
      "the listed distractors, and make the game winnable. Output the entire game "
      "as a single fenced code block.";
  return bundle;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"worldforge: author, play, and evaluate text games"};
  app.require_subcommand(1);

  // play
  auto* play = app.add_subcommand("play", "interactive REPL for one game");
  std::string playGame;
  std::uint64_t playSeed = 42;
  play->add_option("game", playGame, "game file (.wg)")->required();
  play->add_option("--seed", playSeed, "world seed (default 42)");

  // run-solution
  auto* runSol = app.add_subcommand("run-solution", "replay a solution transcript");
  std::string rsGame, rsSolution;
  std::uint64_t rsSeed = 42;
  runSol->add_option("game", rsGame, "game file (.wg)")->required();
  runSol->add_option("solution", rsSolution, "solution transcript")->required();
  runSol->add_option("--seed", rsSeed, "world seed (default 42)");

  // validate
  auto* validate = app.add_subcommand("validate", "technical-validity report for one game");
  std::string vGame;
  int vDepth = 3, vBranchCap = 100;
  std::uint64_t vSeed = 42;
  validate->add_option("game", vGame, "game file (.wg)")->required();
  validate->add_option("--depth", vDepth, "exploration depth (default 3)");
  validate->add_option("--branch-cap", vBranchCap, "max actions expanded per state (default 100)");
  validate->add_option("--seed", vSeed, "sampling seed (default 42)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "full report for a game or a corpus directory");
  std::string eTarget, eSpec, eJudge = "mock:aligned", eOut, eConfig;
  std::uint64_t eSeed = 42;
  int eJobs = 1;
  evaluate->add_option("target", eTarget, "game file or corpus directory")->required();
  evaluate->add_option("--spec", eSpec, "task specification (.spec.json; required for single games)");
  evaluate->add_option("--judge", eJudge, "mock:aligned | mock:misaligned | llm (default mock:aligned)");
  evaluate->add_option("--out", eOut, "directory for report files");
  evaluate->add_option("--config", eConfig, "client config for --judge llm");
  evaluate->add_option("--seed", eSeed, "seed (default 42)");
  evaluate->add_option("--jobs", eJobs, "parallel per-game evaluations (default 1)");

  // winnable
  auto* winnable = app.add_subcommand("winnable", "breadth-first winnability search");
  std::string wGame;
  int wMaxDepth = 20;
  std::int64_t wBudget = 200000;
  std::uint64_t wSeed = 42;
  winnable->add_option("game", wGame, "game file (.wg)")->required();
  winnable->add_option("--max-depth", wMaxDepth, "plan length bound (default 20)");
  winnable->add_option("--node-budget", wBudget, "node expansion budget (default 200000)");
  winnable->add_option("--seed", wSeed, "world seed (default 42)");

  // stats
  auto* stats = app.add_subcommand("stats", "per-game statistics over a corpus");
  std::string sDir;
  bool sJson = false;
  stats->add_option("corpus", sDir, "corpus directory")->required();
  stats->add_flag("--json", sJson, "emit JSON instead of the aligned table");

  // fit-context
  auto* fit = app.add_subcommand("fit-context", "how many example games fit a context window");
  std::int64_t fContext = 0, fPrelude = 0, fPerGame = 0;
  fit->add_option("--context", fContext, "context window size in tokens")->required();
  fit->add_option("--prelude", fPrelude, "tokens reserved before examples (default 0)");
  fit->add_option("--per-game", fPerGame, "tokens per example game")->required();

  // generate / reflect
  auto addGenOptions = [&](CLI::App* cmd, std::string& spec, std::string& example,
                           std::string& config, std::string& corpusDir, std::string& out,
                           std::string& engineDoc) {
    cmd->add_option("--spec", spec, "target task specification")->required();
    cmd->add_option("--example", example, "one-shot corpus example (default boil-water)");
    cmd->add_option("--config", config, "client config JSON")->required();
    cmd->add_option("--corpus", corpusDir, "corpus directory (default corpus)");
    cmd->add_option("--out", out, "run directory (default runs/<timestamp>)");
    cmd->add_option("--engine-doc", engineDoc, "override the embedded language doc");
  };
  auto* generate = app.add_subcommand("generate", "one-shot game generation via the LLM client");
  std::string gSpec, gExample = "boil-water", gConfig, gCorpus = "corpus", gOut, gDoc;
  addGenOptions(generate, gSpec, gExample, gConfig, gCorpus, gOut, gDoc);
  auto* reflect = app.add_subcommand("reflect", "full generate->validate->reflect loop");
  std::string rSpec, rExample = "boil-water", rConfig, rCorpus = "corpus", rOut, rDoc;
  addGenOptions(reflect, rSpec, rExample, rConfig, rCorpus, rOut, rDoc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e); // --help exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*play) return runPlay(playGame, playSeed);
    if (*runSol) return runSolution(rsGame, rsSolution, rsSeed);

    if (*validate) {
      std::string source = slurp(vGame);
      ValidityReport report = checkValidity(source, vDepth, vBranchCap, vSeed);
      std::cout << validityToJson(report);
      return report.initOk && report.validActionsOk && report.runnableOk ? kOk : kFailures;
    }

    if (*evaluate) {
      std::unique_ptr<ModelClient> client;
      std::unique_ptr<Judge> judge = makeJudge(eJudge, eConfig, client);
      std::optional<fs::path> outDir;
      if (!eOut.empty()) outDir = fs::path(eOut);
      if (fs::is_directory(eTarget)) {
        CorpusEvalResult result = evaluateCorpus(eTarget, *judge, eSeed, outDir, eJobs);
        for (const auto& r : result.reports) printPhaseClocks(r);
        std::cout << corpusSummaryToJson(result);
        bool clean = true;
        for (const auto& r : result.reports) clean = clean && reportClean(r);
        return clean ? kOk : kFailures;
      }
      if (eSpec.empty())
        throw CLI::ValidationError("single-game evaluate requires --spec");
      EvalReport report =
          evaluateGame(slurp(eTarget), loadSpec(eSpec), *judge, eSeed,
                       fs::path(eTarget).stem().string());
      printPhaseClocks(report);
      std::cout << evalReportToJson(report);
      if (outDir) {
        fs::create_directories(*outDir);
        std::ofstream(*outDir / (report.gameId + ".report.json"), std::ios::binary)
            << evalReportToJson(report);
      }
      return reportClean(report) ? kOk : kFailures;
    }

    if (*winnable) {
      Game game = loadGame(wGame);
      WinnabilityResult result = searchWinnable(game, wMaxDepth, wBudget, wSeed);
      if (result.winnable) {
        std::cout << "winnable in " << result.plan.size() << " steps ("
                  << result.nodesExpanded << " nodes expanded):\n";
        for (const auto& a : result.plan) std::cout << "  " << a << "\n";
        return kOk;
      }
      std::cout << (result.budgetExhausted
                        ? "inconclusive: node budget exhausted without a plan\n"
                        : "not winnable: search space exhausted without a plan\n");
      std::cout << "nodes expanded: " << result.nodesExpanded << "\n";
      return kFailures;
    }

    if (*stats) {
      std::vector<GameStats> all;
      for (const auto& entry : listCorpus(sDir))
        all.push_back(computeStats(sDir, entry.name));
      std::cout << (sJson ? statsToJson(all) : statsToTable(all));
      return kOk;
    }

    if (*fit) {
      try {
        std::cout << contextFit(fContext, fPrelude, fPerGame) << "\n";
      } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
      }
      return kOk;
    }

    if (*generate || *reflect) {
      bool loop = static_cast<bool>(*reflect);
      const auto& spec = loop ? rSpec : gSpec;
      const auto& example = loop ? rExample : gExample;
      const auto& config = loop ? rConfig : gConfig;
      const auto& corpusDir = loop ? rCorpus : gCorpus;
      const auto& doc = loop ? rDoc : gDoc;
      std::string out = loop ? rOut : gOut;
      if (out.empty()) out = timestampDir();

      ClientConfig clientConfig = loadClientConfig(config);
      PromptBundle bundle = makeBundle(spec, corpusDir, example, doc);
      HttpModelClient client;
      if (!loop) {
        AssembledPrompt prompt = assemblePrompt(bundle);
        std::cerr << "prompt tokens (approx): " << prompt.tokenEstimate << "\n";
        std::string response = client.generate(clientConfig, prompt.text);
        std::string source = extractSource(response);
        fs::create_directories(out);
        std::ofstream(fs::path(out) / "round-0.prompt.txt", std::ios::binary) << prompt.text;
        std::ofstream(fs::path(out) / "round-0.response.txt", std::ios::binary) << response;
        std::ofstream(fs::path(out) / "round-0.source.wg", std::ios::binary) << source;
        std::cout << source;
        return kOk;
      }
      std::vector<GenerationRecord> records =
          reflectLoop(clientConfig, bundle, client, fs::path(out));
      for (const auto& r : records)
        std::cerr << "round " << r.round << ": runnableOk="
                  << (r.validity.runnableOk ? "true" : "false")
                  << (r.firstError ? " firstError=" + *r.firstError : "") << "\n";
      std::cout << records.back().extractedSource;
      return records.back().validity.runnableOk ? kOk : kFailures;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const LLMClientError& e) {
    std::cerr << e.what() << "\n";
    return kLlmError;
  } catch (const CorpusError& e) {
    std::cerr << e.what() << "\n";
    return kIoError;
  } catch (const SpecFormatError& e) {
    std::cerr << e.what() << "\n";
    return kIoError;
  } catch (const IoFailure& e) {
    std::cerr << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsage;
}

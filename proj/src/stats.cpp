#include "worldforge/stats.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "worldforge/engine.hpp"
#include "worldforge/parser.hpp"

namespace worldforge {

int approxTokenCount(std::string_view text) {
  int tokens = 0;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalnum(c)) {
      ++tokens;
      while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
    } else {
      ++tokens; // each punctuation character is its own token
      ++i;
    }
  }
  return tokens;
}

std::int64_t contextFit(std::int64_t contextTokens, std::int64_t preludeTokens,
                        std::int64_t perGameTokens) {
  if (perGameTokens <= 0)
    throw std::domain_error("contextFit: perGameTokens must be positive");
  if (preludeTokens > contextTokens)
    throw std::domain_error("contextFit: preludeTokens exceeds contextTokens");
  return (contextTokens - preludeTokens) / perGameTokens;
}

GameStats computeStatsFromSources(const std::string& gameName, const std::string& source,
                                  const Transcript& transcript) {
  GameStats stats;
  stats.gameName = gameName;

  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    ++stats.totalLines;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue; // blank
    if (line[first] == '#')
      ++stats.commentLines;
    else
      ++stats.linesOfCode;
  }
  stats.tokens = approxTokenCount(source);

  ParseResult parsed = parse(source);
  if (!parsed.ok())
    throw CorpusError("stats: game fails to parse: " +
                      formatDiagnostic(parsed.diagnostics.front()));
  const GameDef& def = *parsed.def;

  std::set<std::string> verbs = {"look around", "look at", "inventory", "take",
                                 "put", "open", "close", "turn on", "turn off", "wait"};
  for (const auto& a : def.actionDecls) verbs.insert(a.verb());
  stats.actionVerbs = static_cast<int>(verbs.size());

  std::set<std::string> classes;
  for (const auto& o : def.objectDecls) classes.insert(o.className);
  stats.objectClasses = static_cast<int>(classes.size());
  stats.objectInstances = static_cast<int>(def.objectDecls.size());

  Game game = Game::compile(def);
  GameState initial = game.instantiate(42);
  stats.validActions = static_cast<int>(game.enumerateValidActions(initial).size());
  stats.expertPathLength = static_cast<int>(transcript.commands.size());
  return stats;
}

GameStats computeStats(const std::filesystem::path& corpusDir, const std::string& name) {
  LoadedEntry entry = loadEntry(corpusDir, name);
  return computeStatsFromSources(name, entry.source, entry.transcript);
}

std::string statsToJson(const std::vector<GameStats>& stats) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : stats) {
    nlohmann::json j;
    j["game"] = s.gameName;
    j["linesOfCode"] = s.linesOfCode;
    j["commentLines"] = s.commentLines;
    j["totalLines"] = s.totalLines;
    j["tokens"] = s.tokens;
    j["actionVerbs"] = s.actionVerbs;
    j["validActions"] = s.validActions;
    j["objectClasses"] = s.objectClasses;
    j["objectInstances"] = s.objectInstances;
    j["expertPathLength"] = s.expertPathLength;
    j["validActionsCountedAt"] = "initial-state";
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string statsToTable(const std::vector<GameStats>& stats) {
  struct Col {
    const char* header;
    int (*get)(const GameStats&);
  };
  static const Col cols[] = {
      {"loc", [](const GameStats& s) { return s.linesOfCode; }},
      {"comments", [](const GameStats& s) { return s.commentLines; }},
      {"tokens", [](const GameStats& s) { return s.tokens; }},
      {"verbs", [](const GameStats& s) { return s.actionVerbs; }},
      {"valid_actions", [](const GameStats& s) { return s.validActions; }},
      {"classes", [](const GameStats& s) { return s.objectClasses; }},
      {"instances", [](const GameStats& s) { return s.objectInstances; }},
      {"path", [](const GameStats& s) { return s.expertPathLength; }},
  };
  size_t nameWidth = 4;
  for (const auto& s : stats) nameWidth = std::max(nameWidth, s.gameName.size());

  std::ostringstream out;
  out << std::string(nameWidth, ' ').replace(0, 4, "game");
  for (const auto& c : cols) {
    std::string h = c.header;
    out << "  " << std::string(13 - std::min<size_t>(13, h.size()), ' ') << h;
  }
  out << "\n";
  for (const auto& s : stats) {
    out << s.gameName << std::string(nameWidth - s.gameName.size(), ' ');
    for (const auto& c : cols) {
      std::string v = std::to_string(c.get(s));
      out << "  " << std::string(13 - std::min<size_t>(13, v.size()), ' ') << v;
    }
    out << "\n";
  }
  out << "# valid actions are counted at the initial state\n";
  return out.str();
}

} // namespace worldforge

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "worldforge/corpus.hpp"

namespace worldforge {

struct GameStats {
  std::string gameName;
  int linesOfCode = 0;    // non-blank, non-comment
  int commentLines = 0;   // lines whose first non-space character is '#'
  int totalLines = 0;
  int tokens = 0;
  int actionVerbs = 0;    // 10 built-ins + distinct game-defined verbs
  int validActions = 0;   // grounded actions, counted at the initial state
  int objectClasses = 0;  // distinct classes referenced by object declarations
  int objectInstances = 0;
  int expertPathLength = 0; // golden transcript command count
};

// Documented approximation: a token is a maximal alphanumeric run or a
// single non-space punctuation character.
int approxTokenCount(std::string_view text);

// Pure function of the entry's bytes. Propagates corpus load errors.
GameStats computeStats(const std::filesystem::path& corpusDir, const std::string& name);
GameStats computeStatsFromSources(const std::string& gameName, const std::string& source,
                                  const Transcript& transcript);

// floor((contextTokens - preludeTokens) / perGameTokens).
// Throws std::domain_error when perGameTokens <= 0 or preludeTokens > contextTokens.
std::int64_t contextFit(std::int64_t contextTokens, std::int64_t preludeTokens,
                        std::int64_t perGameTokens);

std::string statsToJson(const std::vector<GameStats>& stats);
std::string statsToTable(const std::vector<GameStats>& stats);

} // namespace worldforge

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "worldforge/gamedef.hpp"
#include "worldforge/task_spec.hpp"

namespace worldforge {

struct CorpusEntry {
  std::string name;
  std::filesystem::path gameFile;       // <dir>/<name>/game.wg
  std::filesystem::path specFile;       // <dir>/<name>/spec.spec.json
  std::filesystem::path transcriptFile; // <dir>/<name>/solution.txt (positive entries)
  std::vector<std::string> tags;        // from tags.txt, one per line

  bool isNegative() const;
};

// Expectation line at the end of a solution transcript:
//   EXPECT won score=<n>
struct Transcript {
  std::vector<std::string> commands;
  bool expectWon = false;
  std::int64_t expectScore = 0;
};

struct LoadedEntry {
  CorpusEntry entry;
  std::string source;
  GameDef def;
  TaskSpecification spec;
  Transcript transcript; // empty for negative fixtures without a solution
};

// Name-sorted listing of every corpus entry. Throws CorpusError when the
// directory is missing or an entry lacks a paired file.
std::vector<CorpusEntry> listCorpus(const std::filesystem::path& dir);

// Loads and parses one entry. Throws CorpusError on unknown names, missing
// files, or games that fail parse/validate.
LoadedEntry loadEntry(const std::filesystem::path& dir, const std::string& name);

Transcript parseTranscript(const std::string& text);

} // namespace worldforge

#include "worldforge/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "worldforge/parser.hpp"
#include "worldforge/semantics.hpp"

namespace worldforge {

namespace fs = std::filesystem;

bool CorpusEntry::isNegative() const {
  return std::find(tags.begin(), tags.end(), "negative") != tags.end();
}

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> readTags(const fs::path& path) {
  std::vector<std::string> tags;
  std::ifstream in(path);
  if (!in) return tags;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) tags.push_back(line);
  }
  return tags;
}

} // namespace

std::vector<CorpusEntry> listCorpus(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw CorpusError("corpus directory not found: " + dir.string());
  std::vector<CorpusEntry> entries;
  for (const auto& sub : fs::directory_iterator(dir)) {
    if (!sub.is_directory()) continue;
    fs::path game = sub.path() / "game.wg";
    if (!fs::exists(game)) continue;
    CorpusEntry e;
    e.name = sub.path().filename().string();
    e.gameFile = game;
    e.specFile = sub.path() / "spec.spec.json";
    e.transcriptFile = sub.path() / "solution.txt";
    e.tags = readTags(sub.path() / "tags.txt");
    if (!fs::exists(e.specFile))
      throw CorpusError("entry \"" + e.name + "\" is missing spec.spec.json");
    if (!e.isNegative() && !fs::exists(e.transcriptFile))
      throw CorpusError("entry \"" + e.name + "\" is missing solution.txt");
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.name < b.name; });
  return entries;
}

Transcript parseTranscript(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("EXPECT ", 0) == 0) {
      std::istringstream ex(line.substr(7));
      std::string verdict, scoreToken;
      ex >> verdict >> scoreToken;
      t.expectWon = verdict == "won";
      if (scoreToken.rfind("score=", 0) == 0)
        t.expectScore = std::stoll(scoreToken.substr(6));
      break;
    }
    t.commands.push_back(line);
  }
  return t;
}

LoadedEntry loadEntry(const fs::path& dir, const std::string& name) {
  auto entries = listCorpus(dir);
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const CorpusEntry& e) { return e.name == name; });
  if (it == entries.end()) throw CorpusError("no such corpus entry: " + name);

  LoadedEntry loaded;
  loaded.entry = *it;
  loaded.source = slurp(it->gameFile);
  ParseResult parsed = parse(loaded.source);
  if (!parsed.ok())
    throw CorpusError("entry \"" + name + "\" fails to parse: " +
                      formatDiagnostic(parsed.diagnostics.front()));
  auto diags = validateSemantics(*parsed.def);
  if (!diags.empty())
    throw CorpusError("entry \"" + name + "\" fails validation: " +
                      formatDiagnostic(diags.front()));
  loaded.def = std::move(*parsed.def);
  loaded.spec = loadSpec(it->specFile);
  if (fs::exists(it->transcriptFile))
    loaded.transcript = parseTranscript(slurp(it->transcriptFile));
  return loaded;
}

} // namespace worldforge

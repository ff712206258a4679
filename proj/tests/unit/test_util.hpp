#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "worldforge/engine.hpp"
#include "worldforge/parser.hpp"
#include "worldforge/semantics.hpp"

namespace wftest {

inline std::filesystem::path repoDir() { return WF_REPO_DIR; }
inline std::filesystem::path corpusDir() { return repoDir() / "corpus"; }
inline std::filesystem::path fixturesDir() { return repoDir() / "tests" / "fixtures"; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses, validates, and compiles; fails the test on any diagnostic.
inline worldforge::Game compileGame(const std::string& source) {
  auto parsed = worldforge::parse(source);
  if (!parsed.ok())
    FAIL("parse failed: " << worldforge::formatDiagnostic(parsed.diagnostics.front()));
  auto diags = worldforge::validateSemantics(*parsed.def);
  if (!diags.empty())
    FAIL("validation failed: " << worldforge::formatDiagnostic(diags.front()));
  return worldforge::Game::compile(std::move(*parsed.def));
}

} // namespace wftest

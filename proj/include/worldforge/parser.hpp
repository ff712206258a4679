#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "worldforge/gamedef.hpp"

namespace worldforge {

struct ParseResult {
  std::optional<GameDef> def;          // set on success
  std::vector<ParseDiagnostic> diagnostics; // non-empty on failure
  bool ok() const { return def.has_value(); }
};

// Never throws; diagnostics are the error channel.
ParseResult parse(std::string_view source);

// Canonical rendering. For every valid input, parse(prettyPrint(parse(x)))
// yields an AST equal to parse(x).
std::string prettyPrint(const GameDef& def);
std::string printExpr(const Expr& e);

} // namespace worldforge

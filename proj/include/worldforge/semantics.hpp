#pragma once

#include <vector>

#include "worldforge/gamedef.hpp"

namespace worldforge {

// Empty result iff every GameDef invariant holds. One diagnostic per
// violation (unknown class, duplicate object name, duplicate action pattern,
// expression type mismatch, missing substance properties, missing task or
// win condition, reserved-key type mismatch). Diagnostics are ordered by
// source position. Note: `in <container>` targets of object declarations are
// deliberately not resolved here; unknown containers surface as
// InstantiationFault, matching the engine contract.
std::vector<ParseDiagnostic> validateSemantics(const GameDef& def);

} // namespace worldforge

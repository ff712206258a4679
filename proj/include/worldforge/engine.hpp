#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "worldforge/game_state.hpp"
#include "worldforge/gamedef.hpp"

namespace worldforge {

// One entry of the action registry: a built-in verb or a game-defined action.
struct ActionEntry {
  std::vector<PatternToken> pattern;
  std::string verb;    // literal words before the first slot
  int dslIndex = -1;   // index into GameDef::actionDecls, or -1 for built-ins
  int builtin = -1;    // BuiltinAction value, or -1 for DSL actions
};

enum BuiltinAction {
  kLookAround = 0,
  kLookAt,
  kInventory,
  kTake,
  kPutIn,
  kOpen,
  kClose,
  kTurnOn,
  kTurnOff,
  kWait,
  kBuiltinCount,
};

struct GroundedAction {
  std::string text;
  int entryIndex = 0;        // into Game::actions()
  std::vector<int> boundIds; // one object id per slot
};

struct StepResult {
  std::string observation;
  GameState state;
};

using Bindings = std::map<std::string, int>;

// A compiled game: the validated definition plus derived tables (class
// hierarchy, merged property defaults, action registry, object-name binding).
class Game {
public:
  // Pre: def passed validateSemantics.
  static Game compile(GameDef def);

  const GameDef& def() const { return def_; }
  const std::vector<ActionEntry>& actions() const { return actions_; }

  // Builds the world per object declarations. Identical (def, seed) pairs
  // yield byte-identical states. Throws InstantiationFault.
  GameState instantiate(std::uint64_t seed) const;

  // Grounds every action pattern over the visible objects, in action
  // declaration order then object id order. Empty once the game is over.
  std::vector<GroundedAction> groundActions(const GameState& s) const;
  std::vector<std::string> enumerateValidActions(const GameState& s) const;

  // Full step pipeline: normalize input, match against the grounded set,
  // check preconditions, apply effects, tick, advance win/lose bookkeeping.
  // Unmatched input is a strict no-op. Throws RuntimeFault on effect errors.
  StepResult step(const GameState& s, std::string_view input) const;
  StepResult stepGrounded(const GameState& s, const GroundedAction& a) const;

  // Fires every tick rule whose condition holds (declaration order), then
  // recomputes each substance's physical state and displayed name.
  void tick(GameState& s) const;

  // Deterministic description of the agent's current room.
  std::string makeDescription(const GameState& s) const;
  std::string describeObject(const GameState& s, int id) const;

  // Pure expression evaluation. Throws RuntimeFault on access to a
  // destroyed object.
  PropertyValue evalExpr(const GameState& s, const Expr& e, const Bindings& b) const;

  // Declared identifier -> instantiated object id (slot variables shadow
  // these at evaluation time). Returns -1 when unknown.
  int objectIdOf(std::string_view declaredName) const;

  // True when className is reachable from obj's class (engine bases match
  // structurally: Container by isContainer, Device by isActivatable, ...).
  bool matchesClass(const GameState& s, const GameObject& obj, const std::string& className) const;
  bool classChainContains(const std::string& className, const std::string& ancestor) const;
  bool isSubstance(const GameObject& obj) const;

  // Objects groundable into action slots / quantifier extents: live, visible
  // from the agent's room, not the agent, the world, or a room.
  std::vector<int> visibleObjects(const GameState& s) const;

  static SubstanceState substanceStateOf(const GameObject& obj);

private:
  GameDef def_;
  std::vector<ActionEntry> actions_;
  std::map<std::string, int> objectIds_; // declared identifier -> id
  std::map<std::string, std::string> classBase_; // declared class -> base
  std::map<std::string, std::map<std::string, PropertyValue>> classDefaults_; // merged

  std::map<std::string, PropertyValue> mergedDefaultsFor(const std::string& className) const;
  void applyEffects(GameState& s, const std::vector<Effect>& effects,
                    const Bindings& b, const std::string& actionText) const;
  int resolveRef(const GameState& s, const std::string& name, const Bindings& b,
                 const std::string& actionText, const SourceSpan& span) const;
  void evaluateOutcome(GameState& s) const;
  void refreshSubstances(GameState& s) const;
  friend class EngineTestPeer;
};

// Lowercase, trim, collapse inner whitespace: the step() input normalization.
std::string normalizeCommand(std::string_view input);

} // namespace worldforge

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "worldforge/property.hpp"

namespace worldforge {

struct GameObject {
  int id = 0;
  std::string name; // displayed name; substances track their physical state
  std::string className;
  std::map<std::string, PropertyValue> properties;
  int parentId = -1; // -1 only for the world root
  std::vector<int> childIds; // insertion order, deterministic
  bool alive = true;

  bool boolProp(const std::string& key, bool fallback = false) const;
  double realProp(const std::string& key, double fallback = 0.0) const;
  const std::string* textProp(const std::string& key) const;
};

enum class SubstanceState { Solid, Liquid, Gas };

struct GameState {
  std::vector<GameObject> objects; // index == id; destroyed slots stay, alive=false
  int worldId = 0;
  int agentId = -1;
  std::int64_t score = 0;
  std::int64_t maxScore = 0;
  bool gameOver = false;
  bool gameWon = false;
  int numSteps = 0;
  std::uint64_t rngSeed = 0;
  std::string taskDescription;
  int nextId = 0;
  std::vector<std::uint8_t> achievedWins; // one latch per win condition

  const GameObject& object(int id) const;
  GameObject& object(int id);
  bool isLive(int id) const;
  // True when `innerId` is a strict descendant of `outerId`.
  bool isInside(int innerId, int outerId) const;
  // Nearest ancestor (or self) flagged isRoom; falls back to the world root.
  int roomOf(int id) const;
  void detach(int id);
  void attach(int id, int parentId);
};

enum class SerializeMode { Full, Search };

// Deterministic canonical encoding: objects sorted by id, properties sorted
// by key, child lists in containment order. Search mode omits numSteps so
// revisited worlds deduplicate during search.
std::string canonicalSerialize(const GameState& s, SerializeMode mode);

// Inverse of canonicalSerialize for Full-mode payloads.
GameState canonicalDeserialize(const std::string& bytes);

} // namespace worldforge

#include "worldforge/game_state.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace worldforge {

bool GameObject::boolProp(const std::string& key, bool fallback) const {
  auto it = properties.find(key);
  if (it == properties.end() || !std::holds_alternative<bool>(it->second)) return fallback;
  return std::get<bool>(it->second);
}

double GameObject::realProp(const std::string& key, double fallback) const {
  auto it = properties.find(key);
  if (it == properties.end()) return fallback;
  if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
  if (std::holds_alternative<std::int64_t>(it->second))
    return static_cast<double>(std::get<std::int64_t>(it->second));
  return fallback;
}

const std::string* GameObject::textProp(const std::string& key) const {
  auto it = properties.find(key);
  if (it == properties.end() || !std::holds_alternative<std::string>(it->second))
    return nullptr;
  return &std::get<std::string>(it->second);
}

const GameObject& GameState::object(int id) const {
  return objects.at(static_cast<size_t>(id));
}

GameObject& GameState::object(int id) { return objects.at(static_cast<size_t>(id)); }

bool GameState::isLive(int id) const {
  return id >= 0 && id < static_cast<int>(objects.size()) &&
         objects[static_cast<size_t>(id)].alive;
}

bool GameState::isInside(int innerId, int outerId) const {
  int cur = object(innerId).parentId;
  int guard = static_cast<int>(objects.size()) + 1;
  while (cur >= 0 && guard-- > 0) {
    if (cur == outerId) return true;
    cur = object(cur).parentId;
  }
  return false;
}

int GameState::roomOf(int id) const {
  int cur = id;
  int guard = static_cast<int>(objects.size()) + 1;
  while (guard-- > 0) {
    const GameObject& o = object(cur);
    if (o.boolProp("isRoom")) return cur;
    if (o.parentId < 0) return cur;
    cur = o.parentId;
  }
  return worldId;
}

void GameState::detach(int id) {
  GameObject& o = object(id);
  if (o.parentId < 0) return;
  auto& siblings = object(o.parentId).childIds;
  siblings.erase(std::remove(siblings.begin(), siblings.end(), id), siblings.end());
  o.parentId = -1;
}

void GameState::attach(int id, int parentId) {
  object(id).parentId = parentId;
  object(parentId).childIds.push_back(id);
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

namespace {

std::string quoted(const std::string& s) {
  return formatPropertyValue(PropertyValue(s));
}

std::string csv(const std::vector<int>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

} // namespace

std::string canonicalSerialize(const GameState& s, SerializeMode mode) {
  std::string out = "wgstate ";
  out += mode == SerializeMode::Full ? "full\n" : "search\n";
  out += "world=" + std::to_string(s.worldId) + " agent=" + std::to_string(s.agentId) +
         " score=" + std::to_string(s.score) + " max=" + std::to_string(s.maxScore) +
         " over=" + std::to_string(s.gameOver ? 1 : 0) +
         " won=" + std::to_string(s.gameWon ? 1 : 0);
  if (mode == SerializeMode::Full) out += " steps=" + std::to_string(s.numSteps);
  out += " next=" + std::to_string(s.nextId) + " seed=" + std::to_string(s.rngSeed) + "\n";
  out += "achieved=";
  for (size_t i = 0; i < s.achievedWins.size(); ++i) {
    if (i) out += ',';
    out += s.achievedWins[i] ? '1' : '0';
  }
  out += "\ntask=" + quoted(s.taskDescription) + "\n";
  for (const auto& o : s.objects) {
    if (!o.alive) continue;
    out += "obj " + std::to_string(o.id) + " class=" + quoted(o.className) +
           " name=" + quoted(o.name) + " parent=" + std::to_string(o.parentId) +
           " children=" + csv(o.childIds) + "\n";
    for (const auto& [key, value] : o.properties) // std::map: key-sorted
      out += "p " + std::to_string(o.id) + " " + key + "=" +
             formatPropertyValue(value) + "\n";
  }
  return out;
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw std::runtime_error("state deserialize: " + why);
  }

  bool eat(std::string_view token) {
    if (text.compare(pos, token.size(), token) == 0) {
      pos += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!eat(token)) fail("expected '" + std::string(token) + "'");
  }

  std::int64_t integer() {
    size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return std::strtoll(text.substr(start, pos - start).c_str(), nullptr, 10);
  }

  std::string quotedString() {
    expect("\"");
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      char c = text[pos++];
      if (c == '\\' && pos < text.size()) {
        char e = text[pos++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: out += e;
        }
      } else {
        out += c;
      }
    }
    expect("\"");
    return out;
  }

  PropertyValue value() {
    if (pos < text.size() && text[pos] == '"') return PropertyValue(quotedString());
    if (eat("true")) return PropertyValue(true);
    if (eat("false")) return PropertyValue(false);
    size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    bool real = false;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == 'e' || text[pos] == 'E' || text[pos] == '+' ||
            (text[pos] == '-' && (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
      if (text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E') real = true;
      ++pos;
    }
    std::string token = text.substr(start, pos - start);
    if (token.empty()) fail("expected value");
    if (real) return PropertyValue(std::strtod(token.c_str(), nullptr));
    return PropertyValue(static_cast<std::int64_t>(std::strtoll(token.c_str(), nullptr, 10)));
  }
};

} // namespace

GameState canonicalDeserialize(const std::string& bytes) {
  Cursor c{bytes};
  GameState s;
  c.expect("wgstate full\n");
  c.expect("world=");
  s.worldId = static_cast<int>(c.integer());
  c.expect(" agent=");
  s.agentId = static_cast<int>(c.integer());
  c.expect(" score=");
  s.score = c.integer();
  c.expect(" max=");
  s.maxScore = c.integer();
  c.expect(" over=");
  s.gameOver = c.integer() != 0;
  c.expect(" won=");
  s.gameWon = c.integer() != 0;
  c.expect(" steps=");
  s.numSteps = static_cast<int>(c.integer());
  c.expect(" next=");
  s.nextId = static_cast<int>(c.integer());
  c.expect(" seed=");
  s.rngSeed = static_cast<std::uint64_t>(c.integer());
  c.expect("\nachieved=");
  while (c.pos < bytes.size() && bytes[c.pos] != '\n') {
    if (bytes[c.pos] == ',') ++c.pos;
    s.achievedWins.push_back(bytes[c.pos] == '1' ? 1 : 0);
    ++c.pos;
  }
  c.expect("\ntask=");
  s.taskDescription = c.quotedString();
  c.expect("\n");
  s.objects.resize(static_cast<size_t>(s.nextId));
  for (size_t i = 0; i < s.objects.size(); ++i) {
    s.objects[i].id = static_cast<int>(i);
    s.objects[i].alive = false;
  }
  while (c.pos < bytes.size()) {
    if (c.eat("obj ")) {
      int id = static_cast<int>(c.integer());
      if (id < 0 || id >= s.nextId) c.fail("object id out of range");
      GameObject& o = s.objects[static_cast<size_t>(id)];
      o.alive = true;
      c.expect(" class=");
      o.className = c.quotedString();
      c.expect(" name=");
      o.name = c.quotedString();
      c.expect(" parent=");
      o.parentId = static_cast<int>(c.integer());
      c.expect(" children=");
      while (c.pos < bytes.size() && bytes[c.pos] != '\n') {
        if (bytes[c.pos] == ',') ++c.pos;
        o.childIds.push_back(static_cast<int>(c.integer()));
      }
      c.expect("\n");
    } else if (c.eat("p ")) {
      int id = static_cast<int>(c.integer());
      c.expect(" ");
      size_t eq = bytes.find('=', c.pos);
      if (eq == std::string::npos) c.fail("property line without '='");
      std::string key = bytes.substr(c.pos, eq - c.pos);
      c.pos = eq + 1;
      s.objects.at(static_cast<size_t>(id)).properties[key] = c.value();
      c.expect("\n");
    } else {
      c.fail("unexpected line");
    }
  }
  return s;
}

} // namespace worldforge

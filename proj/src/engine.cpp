#include "worldforge/engine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace worldforge {

std::string normalizeCommand(std::string_view input) {
  std::string out;
  bool pendingSpace = false;
  for (char c : input) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pendingSpace = true;
      continue;
    }
    if (pendingSpace) {
      out += ' ';
      pendingSpace = false;
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

SubstanceState Game::substanceStateOf(const GameObject& obj) {
  double t = obj.realProp("temperature", 20.0);
  double melting = obj.realProp("meltingPoint", 0.0);
  double boiling = obj.realProp("boilingPoint", 100.0);
  if (t < melting) return SubstanceState::Solid;
  if (t < boiling) return SubstanceState::Liquid;
  return SubstanceState::Gas;
}

namespace {

std::vector<PatternToken> builtinPattern(BuiltinAction b) {
  auto lit = [](std::string w) {
    PatternToken t;
    t.text = std::move(w);
    return t;
  };
  auto slot = [](std::string name, std::string cls) {
    PatternToken t;
    t.isSlot = true;
    t.text = std::move(name);
    t.className = std::move(cls);
    return t;
  };
  switch (b) {
    case kLookAround: return {lit("look"), lit("around")};
    case kLookAt: return {lit("look"), lit("at"), slot("x", "GameObject")};
    case kInventory: return {lit("inventory")};
    case kTake: return {lit("take"), slot("x", "GameObject")};
    case kPutIn: return {lit("put"), slot("x", "GameObject"), lit("in"), slot("y", "Container")};
    case kOpen: return {lit("open"), slot("x", "GameObject")};
    case kClose: return {lit("close"), slot("x", "GameObject")};
    case kTurnOn: return {lit("turn"), lit("on"), slot("x", "GameObject")};
    case kTurnOff: return {lit("turn"), lit("off"), slot("x", "GameObject")};
    case kWait: return {lit("wait")};
    default: return {};
  }
}

std::string verbOf(const std::vector<PatternToken>& pattern) {
  std::string out;
  for (const auto& t : pattern) {
    if (t.isSlot) break;
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

Game Game::compile(GameDef def) {
  Game g;
  g.def_ = std::move(def);
  for (const auto& c : g.def_.classDecls) g.classBase_[c.name] = c.base;
  for (auto base : {"GameObject", "Container", "Device", "Substance", "Agent"})
    g.classDefaults_[base] = g.mergedDefaultsFor(base);
  for (const auto& c : g.def_.classDecls)
    g.classDefaults_[c.name] = g.mergedDefaultsFor(c.name);
  for (size_t i = 0; i < g.def_.objectDecls.size(); ++i)
    g.objectIds_[g.def_.objectDecls[i].name] = static_cast<int>(i) + 1;
  for (int b = 0; b < kBuiltinCount; ++b) {
    ActionEntry e;
    e.pattern = builtinPattern(static_cast<BuiltinAction>(b));
    e.verb = verbOf(e.pattern);
    e.builtin = b;
    g.actions_.push_back(std::move(e));
  }
  for (size_t i = 0; i < g.def_.actionDecls.size(); ++i) {
    ActionEntry e;
    e.pattern = g.def_.actionDecls[i].pattern;
    e.verb = verbOf(e.pattern);
    e.dslIndex = static_cast<int>(i);
    g.actions_.push_back(std::move(e));
  }
  return g;
}

bool Game::classChainContains(const std::string& className, const std::string& ancestor) const {
  std::string cur = className;
  std::set<std::string> seen;
  while (true) {
    if (cur == ancestor) return true;
    if (isEngineBaseClass(cur)) return cur == ancestor;
    auto it = classBase_.find(cur);
    if (it == classBase_.end() || !seen.insert(cur).second) return false;
    cur = it->second;
  }
}

bool Game::isSubstance(const GameObject& obj) const {
  return classChainContains(obj.className, "Substance");
}

namespace {

// Integer literals widen when the slot they land in is real-typed.
PropertyValue coerceForKey(const std::string& key, const PropertyValue& value,
                           const std::map<std::string, PropertyValue>& existing) {
  bool wantsReal = false;
  if (auto reserved = reservedPropertyType(key))
    wantsReal = *reserved == PropertyType::Real;
  else {
    auto it = existing.find(key);
    wantsReal = it != existing.end() && typeOf(it->second) == PropertyType::Real;
  }
  if (wantsReal && typeOf(value) == PropertyType::Integer)
    return PropertyValue(static_cast<double>(std::get<std::int64_t>(value)));
  return value;
}

} // namespace

std::map<std::string, PropertyValue> Game::mergedDefaultsFor(const std::string& className) const {
  // Resolve the inheritance chain leaf-first, then merge root-first.
  std::vector<std::string> chain;
  std::string cur = className;
  std::set<std::string> seen;
  while (true) {
    chain.push_back(cur);
    if (isEngineBaseClass(cur) || !seen.insert(cur).second) break;
    auto it = classBase_.find(cur);
    if (it == classBase_.end()) break;
    cur = it->second;
  }
  std::map<std::string, PropertyValue> props{{"isMoveable", PropertyValue(false)}};
  const std::string& base = chain.back();
  if (base == "Container") {
    props["isContainer"] = PropertyValue(true);
    props["isOpenable"] = PropertyValue(false);
    props["isOpen"] = PropertyValue(true);
  } else if (base == "Device") {
    props["isActivatable"] = PropertyValue(true);
    props["isOn"] = PropertyValue(false);
  } else if (base == "Substance") {
    props["temperature"] = PropertyValue(20.0);
  } else if (base == "Agent") {
    props["isContainer"] = PropertyValue(true);
    props["isOpen"] = PropertyValue(true);
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (isEngineBaseClass(*it)) continue;
    for (const auto& d : def_.classDecls) {
      if (d.name != *it) continue;
      for (const auto& a : d.defaults) {
        if (a.key == "name") continue;
        props[a.key] = coerceForKey(a.key, a.value, props);
      }
    }
  }
  return props;
}

int Game::objectIdOf(std::string_view declaredName) const {
  auto it = objectIds_.find(std::string(declaredName));
  return it == objectIds_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Instantiation
// ---------------------------------------------------------------------------

GameState Game::instantiate(std::uint64_t seed) const {
  GameState s;
  s.rngSeed = seed;
  s.taskDescription = def_.taskText;

  GameObject world;
  world.id = 0;
  world.name = "world";
  world.className = "World";
  world.properties = {{"isRoom", PropertyValue(true)},
                      {"isContainer", PropertyValue(true)},
                      {"isOpen", PropertyValue(true)},
                      {"isMoveable", PropertyValue(false)}};
  s.objects.push_back(std::move(world));

  for (const auto& decl : def_.objectDecls) {
    if (!isEngineBaseClass(decl.className) && !classBase_.count(decl.className))
      throw InstantiationFault(decl.name, "unknown class \"" + decl.className + "\"");
    GameObject o;
    o.id = static_cast<int>(s.objects.size());
    o.className = decl.className;
    o.name = decl.name;
    o.properties = classDefaults_.at(decl.className);
    for (const auto& a : decl.assigns) {
      if (a.key == "name") {
        o.name = std::get<std::string>(a.value);
        continue;
      }
      o.properties[a.key] = coerceForKey(a.key, a.value, o.properties);
    }
    s.objects.push_back(std::move(o));
  }
  s.nextId = static_cast<int>(s.objects.size());

  // Parent links resolve after all objects exist so forward references work.
  for (size_t i = 0; i < def_.objectDecls.size(); ++i) {
    const auto& decl = def_.objectDecls[i];
    int id = static_cast<int>(i) + 1;
    int parent = 0;
    if (decl.container) {
      auto it = objectIds_.find(*decl.container);
      if (it == objectIds_.end())
        throw InstantiationFault(decl.name, "unknown container \"" + *decl.container + "\"");
      parent = it->second;
    }
    if (parent == id) throw InstantiationFault(decl.name, "object contains itself");
    s.attach(id, parent);
  }
  for (const auto& o : s.objects) {
    if (o.id == 0) continue;
    int cur = o.parentId;
    int guard = static_cast<int>(s.objects.size()) + 1;
    while (cur != 0) {
      if (cur < 0 || guard-- <= 0)
        throw InstantiationFault(o.name, "containment cycle");
      cur = s.object(cur).parentId;
    }
  }

  for (const auto& o : s.objects) {
    if (o.id == 0 || !classChainContains(o.className, "Agent")) continue;
    if (s.agentId >= 0)
      throw InstantiationFault(o.name, "multiple agent objects declared");
    s.agentId = o.id;
  }
  if (s.agentId < 0)
    throw InstantiationFault(def_.gameName, "no agent object declared");

  for (const auto& w : def_.winConditions) s.maxScore += w.scoreDelta;
  s.achievedWins.assign(def_.winConditions.size(), 0);

  refreshSubstances(s);
  evaluateOutcome(s);
  return s;
}

// ---------------------------------------------------------------------------
// Visibility and grounding
// ---------------------------------------------------------------------------

std::vector<int> Game::visibleObjects(const GameState& s) const {
  std::vector<int> out;
  int room = s.roomOf(s.agentId);
  std::vector<int> stack(s.object(room).childIds.rbegin(), s.object(room).childIds.rend());
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (!s.isLive(id)) continue;
    const GameObject& o = s.object(id);
    bool isRoom = o.boolProp("isRoom");
    if (id != s.agentId && !isRoom && id != s.worldId) out.push_back(id);
    bool closed = o.boolProp("isOpenable") && !o.boolProp("isOpen");
    if (!isRoom && !closed)
      for (auto it = o.childIds.rbegin(); it != o.childIds.rend(); ++it)
        stack.push_back(*it);
    if (id == s.agentId) // inventory is always visible
      for (auto it = o.childIds.rbegin(); it != o.childIds.rend(); ++it)
        stack.push_back(*it);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Game::matchesClass(const GameState& s, const GameObject& obj,
                        const std::string& className) const {
  if (className == "GameObject") return true;
  if (className == "Container") return obj.boolProp("isContainer");
  if (className == "Device") return obj.boolProp("isActivatable");
  if (className == "Substance") return isSubstance(obj);
  if (className == "Agent")
    return obj.id == s.agentId || classChainContains(obj.className, "Agent");
  return classChainContains(obj.className, className);
}

std::vector<GroundedAction> Game::groundActions(const GameState& s) const {
  std::vector<GroundedAction> out;
  if (s.gameOver) return out;
  std::vector<int> extentAll = visibleObjects(s);
  std::set<std::string> seen;

  for (size_t entry = 0; entry < actions_.size(); ++entry) {
    const ActionEntry& a = actions_[entry];
    std::vector<size_t> slotPositions;
    for (size_t i = 0; i < a.pattern.size(); ++i)
      if (a.pattern[i].isSlot) slotPositions.push_back(i);

    std::vector<int> bound(slotPositions.size(), -1);
    auto emit = [&]() {
      std::string text;
      size_t slot = 0;
      for (const auto& t : a.pattern) {
        if (!text.empty()) text += ' ';
        text += t.isSlot ? s.object(bound[slot++]).name : t.text;
      }
      if (!seen.insert(text).second) return;
      GroundedAction g;
      g.text = std::move(text);
      g.entryIndex = static_cast<int>(entry);
      g.boundIds = bound;
      out.push_back(std::move(g));
    };

    // Nested loops over the extent in id order, distinct bindings per slot.
    auto fill = [&](auto&& self, size_t slotIdx) -> void {
      if (slotIdx == slotPositions.size()) {
        emit();
        return;
      }
      const PatternToken& tok = a.pattern[slotPositions[slotIdx]];
      for (int id : extentAll) {
        if (std::find(bound.begin(), bound.begin() + slotIdx, id) !=
            bound.begin() + slotIdx)
          continue;
        if (!matchesClass(s, s.object(id), tok.className)) continue;
        bound[slotIdx] = id;
        self(self, slotIdx + 1);
      }
      bound[slotIdx] = -1;
    };
    fill(fill, 0);
  }
  return out;
}

std::vector<std::string> Game::enumerateValidActions(const GameState& s) const {
  std::vector<std::string> out;
  for (auto& g : groundActions(s)) out.push_back(g.text);
  return out;
}

// ---------------------------------------------------------------------------
// Expression evaluation
// ---------------------------------------------------------------------------

int Game::resolveRef(const GameState& s, const std::string& name, const Bindings& b,
                     const std::string& actionText, const SourceSpan&) const {
  auto bound = b.find(name);
  int id;
  if (bound != b.end()) {
    id = bound->second;
  } else {
    auto it = objectIds_.find(name);
    if (it == objectIds_.end())
      throw RuntimeFault(actionText, "unknown object \"" + name + "\"");
    id = it->second;
  }
  if (!s.isLive(id)) {
    const std::string& display =
        s.object(id).name.empty() ? name : s.object(id).name;
    throw RuntimeFault(actionText, "access to destroyed object \"" + display + "\"");
  }
  return id;
}

namespace {

bool isTruthy(const PropertyValue& v, const std::string& actionText) {
  if (!std::holds_alternative<bool>(v))
    throw RuntimeFault(actionText, "expected a boolean value");
  return std::get<bool>(v);
}

double asReal(const PropertyValue& v, const std::string& actionText) {
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<std::int64_t>(v))
    return static_cast<double>(std::get<std::int64_t>(v));
  throw RuntimeFault(actionText, "expected a numeric value");
}

} // namespace

PropertyValue Game::evalExpr(const GameState& s, const Expr& e, const Bindings& b) const {
  const std::string ctx = "<eval>";
  // Local recursive evaluator carrying the fault context.
  struct Eval {
    const Game& g;
    const GameState& s;
    const std::string& ctx;

    PropertyValue run(const Expr& e, const Bindings& b) const {
      using K = Expr::Kind;
      switch (e.kind) {
        case K::BoolLit: return PropertyValue(e.boolValue);
        case K::IntLit: return PropertyValue(e.intValue);
        case K::RealLit: return PropertyValue(e.realValue);
        case K::TextLit: return PropertyValue(e.text);
        case K::Prop: {
          int id = g.resolveRef(s, e.text, b, ctx, e.span);
          const auto& props = s.object(id).properties;
          auto it = props.find(e.text2);
          if (it == props.end())
            throw RuntimeFault(ctx, "missing property \"" + e.text2 + "\" on \"" +
                                        e.text + "\"");
          return it->second;
        }
        case K::In: {
          int inner = g.resolveRef(s, e.text, b, ctx, e.span);
          int outer = g.resolveRef(s, e.text2, b, ctx, e.span);
          return PropertyValue(s.isInside(inner, outer));
        }
        case K::Not: return PropertyValue(!isTruthy(run(e.kids[0], b), ctx));
        case K::Neg: {
          PropertyValue v = run(e.kids[0], b);
          if (std::holds_alternative<std::int64_t>(v))
            return PropertyValue(-std::get<std::int64_t>(v));
          return PropertyValue(-asReal(v, ctx));
        }
        case K::Exists:
        case K::Forall: {
          bool exists = e.kind == K::Exists;
          Bindings inner = b;
          for (const auto& o : s.objects) {
            if (!o.alive || o.id == 0) continue;
            if (!g.matchesClass(s, o, e.text2)) continue;
            inner[e.text] = o.id;
            bool hit = isTruthy(run(e.kids[0], inner), ctx);
            if (exists && hit) return PropertyValue(true);
            if (!exists && !hit) return PropertyValue(false);
          }
          return PropertyValue(!exists); // forall over empty extent is true
        }
        case K::Binary: return binary(e, b);
      }
      throw RuntimeFault(ctx, "unreachable expression kind");
    }

    PropertyValue binary(const Expr& e, const Bindings& b) const {
      using Op = Expr::BinOp;
      if (e.op == Op::And)
        return PropertyValue(isTruthy(run(e.kids[0], b), ctx) &&
                             isTruthy(run(e.kids[1], b), ctx));
      if (e.op == Op::Or)
        return PropertyValue(isTruthy(run(e.kids[0], b), ctx) ||
                             isTruthy(run(e.kids[1], b), ctx));
      PropertyValue lhs = run(e.kids[0], b);
      PropertyValue rhs = run(e.kids[1], b);
      bool bothInt = std::holds_alternative<std::int64_t>(lhs) &&
                     std::holds_alternative<std::int64_t>(rhs);
      switch (e.op) {
        case Op::Eq:
        case Op::Ne: {
          bool eq;
          if (lhs.index() == rhs.index())
            eq = lhs == rhs;
          else
            eq = asReal(lhs, ctx) == asReal(rhs, ctx); // int/real mix widens
          return PropertyValue(e.op == Op::Eq ? eq : !eq);
        }
        case Op::Lt: return PropertyValue(asReal(lhs, ctx) < asReal(rhs, ctx));
        case Op::Le: return PropertyValue(asReal(lhs, ctx) <= asReal(rhs, ctx));
        case Op::Gt: return PropertyValue(asReal(lhs, ctx) > asReal(rhs, ctx));
        case Op::Ge: return PropertyValue(asReal(lhs, ctx) >= asReal(rhs, ctx));
        case Op::Add:
          if (bothInt)
            return PropertyValue(std::get<std::int64_t>(lhs) + std::get<std::int64_t>(rhs));
          return PropertyValue(asReal(lhs, ctx) + asReal(rhs, ctx));
        case Op::Sub:
          if (bothInt)
            return PropertyValue(std::get<std::int64_t>(lhs) - std::get<std::int64_t>(rhs));
          return PropertyValue(asReal(lhs, ctx) - asReal(rhs, ctx));
        case Op::Mul:
          if (bothInt)
            return PropertyValue(std::get<std::int64_t>(lhs) * std::get<std::int64_t>(rhs));
          return PropertyValue(asReal(lhs, ctx) * asReal(rhs, ctx));
        case Op::Div: {
          if (bothInt) {
            std::int64_t d = std::get<std::int64_t>(rhs);
            if (d == 0) throw RuntimeFault(ctx, "division by zero");
            return PropertyValue(std::get<std::int64_t>(lhs) / d);
          }
          double d = asReal(rhs, ctx);
          if (d == 0.0) throw RuntimeFault(ctx, "division by zero");
          return PropertyValue(asReal(lhs, ctx) / d);
        }
        default: throw RuntimeFault(ctx, "unreachable operator");
      }
    }
  };
  return Eval{*this, s, ctx}.run(e, b);
}

// ---------------------------------------------------------------------------
// Effects, tick, outcome
// ---------------------------------------------------------------------------

namespace {
thread_local std::string* g_sayCollector = nullptr;

void say(const std::string& text) {
  if (!g_sayCollector) return;
  if (!g_sayCollector->empty()) *g_sayCollector += '\n';
  *g_sayCollector += text;
}
} // namespace

void Game::applyEffects(GameState& s, const std::vector<Effect>& effects,
                        const Bindings& b, const std::string& actionText) const {
  for (const auto& e : effects) {
    switch (e.kind) {
      case Effect::Kind::Set: {
        int id = resolveRef(s, e.a, b, actionText, e.span);
        PropertyValue value = evalExpr(s, *e.value, b);
        GameObject& obj = s.object(id);
        auto it = obj.properties.find(e.b);
        if (it != obj.properties.end() &&
            typeOf(it->second) == PropertyType::Real &&
            typeOf(value) == PropertyType::Integer)
          value = PropertyValue(static_cast<double>(std::get<std::int64_t>(value)));
        if (it != obj.properties.end() && typeOf(it->second) != typeOf(value))
          throw RuntimeFault(actionText, "type mismatch assigning property \"" + e.b + "\"");
        obj.properties[e.b] = std::move(value);
        break;
      }
      case Effect::Kind::Move: {
        int id = resolveRef(s, e.a, b, actionText, e.span);
        int target = resolveRef(s, e.b, b, actionText, e.span);
        if (id == s.worldId || s.object(id).boolProp("isRoom"))
          throw RuntimeFault(actionText, "cannot move a room");
        if (target == id || s.isInside(target, id))
          throw RuntimeFault(actionText, "move would create a containment cycle");
        s.detach(id);
        s.attach(id, target);
        break;
      }
      case Effect::Kind::Create: {
        int parent = resolveRef(s, e.c, b, actionText, e.span);
        auto defaults = classDefaults_.find(e.b);
        if (defaults == classDefaults_.end())
          throw RuntimeFault(actionText, "unknown class \"" + e.b + "\" in create");
        GameObject o;
        o.id = s.nextId++;
        o.name = e.a;
        o.className = e.b;
        o.properties = defaults->second;
        s.objects.push_back(std::move(o));
        s.attach(s.nextId - 1, parent);
        break;
      }
      case Effect::Kind::Destroy: {
        int id = resolveRef(s, e.a, b, actionText, e.span);
        if (id == s.worldId || id == s.agentId || s.object(id).boolProp("isRoom"))
          throw RuntimeFault(actionText, "cannot destroy \"" + s.object(id).name + "\"");
        std::vector<int> doomed{id};
        for (size_t i = 0; i < doomed.size(); ++i)
          for (int child : s.object(doomed[i]).childIds) doomed.push_back(child);
        s.detach(id);
        for (int d : doomed) {
          s.object(d).alive = false;
          s.object(d).childIds.clear();
          s.object(d).parentId = -1;
        }
        break;
      }
      case Effect::Kind::AddScore:
        s.score += e.amount;
        break;
      case Effect::Kind::Say:
        say(e.a);
        break;
    }
  }
}

void Game::tick(GameState& s) const {
  for (const auto& rule : def_.tickRules) {
    if (std::get<bool>(evalExpr(s, rule.condition, {})))
      applyEffects(s, rule.effects, {}, "<tick>");
  }
  refreshSubstances(s);
}

void Game::refreshSubstances(GameState& s) const {
  for (auto& o : s.objects) {
    if (!o.alive || !isSubstance(o)) continue;
    const std::string* name = nullptr;
    switch (substanceStateOf(o)) {
      case SubstanceState::Solid: name = o.textProp("solidName"); break;
      case SubstanceState::Liquid: name = o.textProp("liquidName"); break;
      case SubstanceState::Gas: name = o.textProp("gasName"); break;
    }
    if (name) o.name = *name;
  }
}

void Game::evaluateOutcome(GameState& s) const {
  if (s.gameOver) return;
  for (size_t i = 0; i < def_.winConditions.size(); ++i) {
    if (s.achievedWins[i]) continue;
    if (std::get<bool>(evalExpr(s, def_.winConditions[i].condition, {}))) {
      s.achievedWins[i] = 1;
      s.score += def_.winConditions[i].scoreDelta;
    }
  }
  if (s.score > s.maxScore) s.score = s.maxScore;
  bool allAchieved = true;
  for (auto a : s.achievedWins) allAchieved = allAchieved && a;
  if (allAchieved && !def_.winConditions.empty()) {
    s.gameWon = true;
    s.gameOver = true;
    return;
  }
  for (const auto& l : def_.loseConditions) {
    if (std::get<bool>(evalExpr(s, l.condition, {}))) {
      s.gameOver = true;
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Descriptions
// ---------------------------------------------------------------------------

namespace {

std::string qualifiers(const GameObject& o, bool markEmpty) {
  std::vector<std::string> quals;
  if (o.boolProp("isOpenable")) quals.push_back(o.boolProp("isOpen") ? "open" : "closed");
  if (o.boolProp("isActivatable")) quals.push_back(o.boolProp("isOn") ? "on" : "off");
  if (markEmpty) quals.push_back("empty");
  if (quals.empty()) return "";
  std::string out = " (";
  for (size_t i = 0; i < quals.size(); ++i) {
    if (i) out += ", ";
    out += quals[i];
  }
  out += ')';
  return out;
}

std::string article(const std::string& name) {
  if (!name.empty() && std::string("aeiou").find(name.front()) != std::string::npos)
    return "an ";
  return "a ";
}

} // namespace

void describeLines(const Game& g, const GameState& s, int id, int indent, std::string& out);

static void describeChildren(const Game& g, const GameState& s, const GameObject& o,
                             int indent, std::string& out) {
  for (int child : o.childIds) {
    if (!s.isLive(child) || child == s.agentId) continue;
    describeLines(g, s, child, indent, out);
  }
}

void describeLines(const Game& g, const GameState& s, int id, int indent, std::string& out) {
  const GameObject& o = s.object(id);
  bool open = !o.boolProp("isOpenable") || o.boolProp("isOpen");
  bool listable = o.boolProp("isContainer") && open && !o.boolProp("isRoom");
  int liveChildren = 0;
  for (int c : o.childIds)
    if (s.isLive(c) && c != s.agentId) ++liveChildren;
  std::string line(static_cast<size_t>(indent), ' ');
  line += (g.isSubstance(o) ? "some " : article(o.name)) + o.name +
          qualifiers(o, listable && liveChildren == 0);
  if (listable && liveChildren > 0) {
    line += ", containing:";
    out += line + '\n';
    describeChildren(g, s, o, indent + 2, out);
    return;
  }
  out += line + '\n';
}

std::string Game::makeDescription(const GameState& s) const {
  int room = s.roomOf(s.agentId);
  const GameObject& r = s.object(room);
  int visibleChildren = 0;
  for (int c : r.childIds)
    if (s.isLive(c) && c != s.agentId) ++visibleChildren;
  std::string out = "You are in the " + r.name + ".";
  if (visibleChildren == 0) return out + " There is nothing here.";
  out += "\nYou see:\n";
  describeChildren(*this, s, r, 2, out);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string Game::describeObject(const GameState& s, int id) const {
  std::string out;
  describeLines(*this, s, id, 0, out);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

namespace {

std::string inventoryText(const Game& g, const GameState& s) {
  const GameObject& agent = s.object(s.agentId);
  int held = 0;
  for (int c : agent.childIds)
    if (s.isLive(c)) ++held;
  if (held == 0) return "You are carrying nothing.";
  std::string out = "You are carrying:\n";
  for (int c : agent.childIds) {
    if (!s.isLive(c)) continue;
    describeLines(g, s, c, 2, out);
  }
  if (out.back() == '\n') out.pop_back();
  return out;
}

} // namespace

StepResult Game::stepGrounded(const GameState& s, const GroundedAction& g) const {
  const ActionEntry& entry = actions_.at(static_cast<size_t>(g.entryIndex));
  StepResult r{"", s};
  GameState& st = r.state;

  Bindings bindings;
  {
    size_t slot = 0;
    for (const auto& t : entry.pattern)
      if (t.isSlot) bindings[t.text] = g.boundIds.at(slot++);
  }

  auto failWith = [&](std::string obs) {
    r.observation = std::move(obs);
    r.state = s;
    r.state.numSteps += 1; // precondition failures still consume the turn
    return r;
  };

  std::string says;
  g_sayCollector = &says;
  struct CollectorReset {
    ~CollectorReset() { g_sayCollector = nullptr; }
  } reset;

  bool builtinObservationPending = false;
  int lookAtTarget = -1;
  std::string capturedName;

  if (entry.builtin >= 0) {
    int x = g.boundIds.empty() ? -1 : g.boundIds[0];
    int y = g.boundIds.size() > 1 ? g.boundIds[1] : -1;
    const auto name = [&](int id) { return s.object(id).name; };
    switch (static_cast<BuiltinAction>(entry.builtin)) {
      case kLookAround:
      case kInventory:
        builtinObservationPending = true;
        break;
      case kLookAt:
        builtinObservationPending = true;
        lookAtTarget = x;
        capturedName = name(x);
        break;
      case kTake:
        if (st.isInside(x, st.agentId))
          return failWith("You already have the " + name(x) + ".");
        if (!s.object(x).boolProp("isMoveable"))
          return failWith("You can't take the " + name(x) + ".");
        if (st.isInside(st.agentId, x)) return failWith("You can't take that.");
        st.detach(x);
        st.attach(x, st.agentId);
        r.observation = "You take the " + name(x) + ".";
        break;
      case kPutIn: {
        if (!st.isInside(x, st.agentId))
          return failWith("You're not holding the " + name(x) + ".");
        const GameObject& target = st.object(y);
        if (target.boolProp("isOpenable") && !target.boolProp("isOpen"))
          return failWith("The " + name(y) + " is closed.");
        if (y == x || st.isInside(y, x))
          return failWith("You can't put the " + name(x) + " in the " + name(y) + ".");
        st.detach(x);
        st.attach(x, y);
        r.observation = "You put the " + name(x) + " in the " + name(y) + ".";
        break;
      }
      case kOpen:
        if (!st.object(x).boolProp("isOpenable"))
          return failWith("You can't open the " + name(x) + ".");
        if (st.object(x).boolProp("isOpen"))
          return failWith("The " + name(x) + " is already open.");
        st.object(x).properties["isOpen"] = PropertyValue(true);
        r.observation = "The " + name(x) + " is now open.";
        break;
      case kClose:
        if (!st.object(x).boolProp("isOpenable"))
          return failWith("You can't close the " + name(x) + ".");
        if (!st.object(x).boolProp("isOpen"))
          return failWith("The " + name(x) + " is already closed.");
        st.object(x).properties["isOpen"] = PropertyValue(false);
        r.observation = "The " + name(x) + " is now closed.";
        break;
      case kTurnOn:
        if (!st.object(x).boolProp("isActivatable"))
          return failWith("You can't turn on the " + name(x) + ".");
        if (st.object(x).boolProp("isOn"))
          return failWith("The " + name(x) + " is already on.");
        st.object(x).properties["isOn"] = PropertyValue(true);
        r.observation = "The " + name(x) + " is now on.";
        break;
      case kTurnOff:
        if (!st.object(x).boolProp("isActivatable"))
          return failWith("You can't turn off the " + name(x) + ".");
        if (!st.object(x).boolProp("isOn"))
          return failWith("The " + name(x) + " is already off.");
        st.object(x).properties["isOn"] = PropertyValue(false);
        r.observation = "The " + name(x) + " is now off.";
        break;
      case kWait:
        r.observation = "You wait.";
        break;
      default:
        break;
    }
  } else {
    const ActionDecl& decl = def_.actionDecls.at(static_cast<size_t>(entry.dslIndex));
    if (decl.precondition) {
      PropertyValue ok = evalExpr(st, *decl.precondition, bindings);
      if (!std::get<bool>(ok))
        return failWith(decl.failMessage ? *decl.failMessage : "You can't do that.");
    }
    applyEffects(st, decl.effects, bindings, g.text);
    r.observation = says.empty() ? "OK." : says;
    says.clear();
  }

  // effects applied -> tick -> step counter -> win/lose bookkeeping
  tick(st);
  st.numSteps += 1;
  evaluateOutcome(st);

  if (builtinObservationPending) {
    const ActionEntry& a = actions_.at(static_cast<size_t>(g.entryIndex));
    if (a.builtin == kLookAround)
      r.observation = makeDescription(st);
    else if (a.builtin == kInventory)
      r.observation = inventoryText(*this, st);
    else if (a.builtin == kLookAt)
      r.observation = st.isLive(lookAtTarget) ? describeObject(st, lookAtTarget)
                                              : "The " + capturedName + " is gone.";
  } else if (!says.empty()) {
    r.observation += "\n" + says; // tick-rule messages
  }
  return r;
}

StepResult Game::step(const GameState& s, std::string_view input) const {
  std::string norm = normalizeCommand(input);
  for (const auto& g : groundActions(s)) {
    if (normalizeCommand(g.text) == norm) return stepGrounded(s, g);
  }
  return {"I don't understand that.", s}; // strict no-op, numSteps included
}

} // namespace worldforge

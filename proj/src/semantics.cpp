#include "worldforge/semantics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace worldforge {

namespace {

struct Checker {
  const GameDef& def;
  std::vector<ParseDiagnostic> diags;
  std::map<std::string, std::string> classBase; // declared class -> base
  std::map<std::string, std::map<std::string, PropertyType>> classProps; // merged
  std::map<std::string, const ObjectDecl*> objects;
  std::vector<std::map<std::string, std::string>> scopes; // var -> class

  explicit Checker(const GameDef& d) : def(d) {}

  void report(SourceSpan span, std::string message) {
    diags.push_back({span.line, span.column, std::move(message), ""});
  }

  bool classKnown(const std::string& name) const {
    return isEngineBaseClass(name) || classBase.count(name);
  }

  // Walks the inheritance chain up to an engine base; empty on cycle/unknown.
  std::vector<std::string> chainOf(const std::string& name) const {
    std::vector<std::string> chain;
    std::set<std::string> seen;
    std::string cur = name;
    while (true) {
      if (!seen.insert(cur).second) return {};
      chain.push_back(cur);
      if (isEngineBaseClass(cur)) return chain;
      auto it = classBase.find(cur);
      if (it == classBase.end()) return {};
      cur = it->second;
    }
  }

  static std::map<std::string, PropertyType> basePropTypes(const std::string& base) {
    std::map<std::string, PropertyType> p{{"isMoveable", PropertyType::Boolean}};
    if (base == "Container" || base == "Agent") {
      p["isContainer"] = PropertyType::Boolean;
      p["isOpen"] = PropertyType::Boolean;
      if (base == "Container") p["isOpenable"] = PropertyType::Boolean;
    } else if (base == "Device") {
      p["isActivatable"] = PropertyType::Boolean;
      p["isOn"] = PropertyType::Boolean;
    } else if (base == "Substance") {
      p["temperature"] = PropertyType::Real;
    }
    return p;
  }

  // Literal assigns: reserved keys keep their fixed type (integer literals
  // widen to real); other keys take the literal's type.
  std::optional<PropertyType> assignType(const PropAssign& a) {
    PropertyType literal = typeOf(a.value);
    if (a.key == "name") {
      if (literal != PropertyType::Text) {
        report(a.span, "property \"name\" must be text");
        return std::nullopt;
      }
      return PropertyType::Text;
    }
    if (auto reserved = reservedPropertyType(a.key)) {
      bool ok = literal == *reserved ||
                (*reserved == PropertyType::Real && literal == PropertyType::Integer);
      if (!ok) {
        report(a.span, "reserved property \"" + a.key + "\" must be " +
                           std::string(propertyTypeName(*reserved)) + ", got " +
                           std::string(propertyTypeName(literal)));
        return std::nullopt;
      }
      return *reserved;
    }
    return literal;
  }

  void collectClasses() {
    for (const auto& c : def.classDecls) {
      if (isEngineBaseClass(c.name) || classBase.count(c.name)) {
        report(c.span, "duplicate class \"" + c.name + "\"");
        continue;
      }
      classBase[c.name] = c.base;
    }
    for (const auto& c : def.classDecls) {
      auto chain = chainOf(c.name);
      if (chain.empty()) {
        report(c.span, "unknown class \"" + c.base + "\" (base of " + c.name + ")");
        continue;
      }
      // Merge property types root-first so derived defaults win.
      std::map<std::string, PropertyType> props = basePropTypes(chain.back());
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if (isEngineBaseClass(*it)) continue;
        const ClassDecl* decl = nullptr;
        for (const auto& d : def.classDecls)
          if (d.name == *it) { decl = &d; break; }
        if (!decl) continue;
        for (const auto& a : decl->defaults)
          if (auto t = (*it == c.name) ? assignType(a) : typeOfQuiet(a))
            props[a.key] = *t;
      }
      classProps[c.name] = std::move(props);
    }
    for (auto base : {"GameObject", "Container", "Device", "Substance", "Agent"})
      classProps[base] = basePropTypes(base);

    // Substance-derived classes must declare the naming and threshold set.
    for (const auto& c : def.classDecls) {
      auto chain = chainOf(c.name);
      if (chain.empty() || chain.back() != "Substance") continue;
      for (auto key : {"solidName", "liquidName", "gasName", "meltingPoint", "boilingPoint"}) {
        const auto& props = classProps[c.name];
        if (!props.count(key))
          report(c.span, "substance class \"" + c.name + "\" is missing " + key);
      }
    }
  }

  // assignType without re-reporting (used when merging ancestor defaults).
  std::optional<PropertyType> typeOfQuiet(const PropAssign& a) const {
    if (a.key == "name") return PropertyType::Text;
    if (auto reserved = reservedPropertyType(a.key)) return *reserved;
    return typeOf(a.value);
  }

  void collectObjects() {
    for (const auto& o : def.objectDecls) {
      if (!classKnown(o.className))
        report(o.span, "unknown class \"" + o.className + "\" for object " + o.name);
      if (!objects.emplace(o.name, &o).second)
        report(o.span, "duplicate object name \"" + o.name + "\"");
      for (const auto& a : o.assigns) assignType(a);
      checkThresholds(o);
    }
  }

  void checkThresholds(const ObjectDecl& o) {
    auto chain = chainOf(o.className);
    if (chain.empty() || chain.back() != "Substance") return;
    auto resolve = [&](const char* key) -> std::optional<double> {
      for (const auto& a : o.assigns)
        if (a.key == key) {
          if (typeOf(a.value) == PropertyType::Real) return std::get<double>(a.value);
          if (typeOf(a.value) == PropertyType::Integer)
            return static_cast<double>(std::get<std::int64_t>(a.value));
          return std::nullopt;
        }
      for (const auto& cls : chain) {
        for (const auto& d : def.classDecls) {
          if (d.name != cls) continue;
          for (const auto& a : d.defaults)
            if (a.key == key) {
              if (typeOf(a.value) == PropertyType::Real) return std::get<double>(a.value);
              if (typeOf(a.value) == PropertyType::Integer)
                return static_cast<double>(std::get<std::int64_t>(a.value));
            }
        }
      }
      return std::nullopt;
    };
    auto melting = resolve("meltingPoint");
    auto boiling = resolve("boilingPoint");
    if (melting && boiling && !(*melting < *boiling))
      report(o.span, "object \"" + o.name + "\": meltingPoint must be below boilingPoint");
  }

  // Returns the class of an object reference (declared object or in-scope
  // variable), or empty after reporting.
  std::string carrierClass(const std::string& name, SourceSpan span) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return found->second;
    }
    auto it = objects.find(name);
    if (it != objects.end()) return it->second->className;
    report(span, "unknown object \"" + name + "\"");
    return "";
  }

  std::optional<PropertyType> propertyType(const std::string& carrier,
                                           const std::string& carrierClassName,
                                           const std::string& prop, SourceSpan span) {
    // Object-level assigns may introduce object-specific properties.
    auto obj = objects.find(carrier);
    if (obj != objects.end())
      for (const auto& a : obj->second->assigns)
        if (a.key == prop) return typeOfQuiet(a);
    auto cls = classProps.find(carrierClassName);
    if (cls != classProps.end()) {
      auto p = cls->second.find(prop);
      if (p != cls->second.end()) return p->second;
    }
    report(span, "unknown property \"" + prop + "\" on " +
                     (carrierClassName.empty() ? "object" : carrierClassName) +
                     " \"" + carrier + "\"");
    return std::nullopt;
  }

  static bool numeric(PropertyType t) {
    return t == PropertyType::Integer || t == PropertyType::Real;
  }

  std::optional<PropertyType> checkExpr(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::BoolLit: return PropertyType::Boolean;
      case K::IntLit: return PropertyType::Integer;
      case K::RealLit: return PropertyType::Real;
      case K::TextLit: return PropertyType::Text;
      case K::Prop: {
        std::string cls = carrierClass(e.text, e.span);
        if (cls.empty()) return std::nullopt;
        return propertyType(e.text, cls, e.text2, e.span);
      }
      case K::In: {
        bool ok = !carrierClass(e.text, e.span).empty();
        ok = !carrierClass(e.text2, e.span).empty() && ok;
        return ok ? std::optional(PropertyType::Boolean) : std::nullopt;
      }
      case K::Not: {
        auto t = checkExpr(e.kids[0]);
        if (t && *t != PropertyType::Boolean)
          report(e.span, "'not' needs a boolean operand");
        return PropertyType::Boolean;
      }
      case K::Neg: {
        auto t = checkExpr(e.kids[0]);
        if (t && !numeric(*t)) report(e.span, "unary '-' needs a numeric operand");
        return t;
      }
      case K::Exists:
      case K::Forall: {
        if (!classKnown(e.text2)) {
          report(e.span, "unknown class \"" + e.text2 + "\" in quantifier");
          return PropertyType::Boolean;
        }
        scopes.push_back({{e.text, e.text2}});
        auto t = checkExpr(e.kids[0]);
        scopes.pop_back();
        if (t && *t != PropertyType::Boolean)
          report(e.span, "quantifier body must be boolean");
        return PropertyType::Boolean;
      }
      case K::Binary: {
        auto lhs = checkExpr(e.kids[0]);
        auto rhs = checkExpr(e.kids[1]);
        if (!lhs || !rhs) return resultTypeOf(e.op, lhs, rhs);
        switch (e.op) {
          case Expr::BinOp::And:
          case Expr::BinOp::Or:
            if (*lhs != PropertyType::Boolean || *rhs != PropertyType::Boolean)
              report(e.span, "'and'/'or' need boolean operands");
            return PropertyType::Boolean;
          case Expr::BinOp::Eq:
          case Expr::BinOp::Ne:
            if (!(*lhs == *rhs || (numeric(*lhs) && numeric(*rhs))))
              report(e.span, "'=='/'!=' operands must have matching types");
            return PropertyType::Boolean;
          case Expr::BinOp::Lt:
          case Expr::BinOp::Le:
          case Expr::BinOp::Gt:
          case Expr::BinOp::Ge:
            if (!(numeric(*lhs) && numeric(*rhs)))
              report(e.span, "comparison needs numeric operands");
            return PropertyType::Boolean;
          case Expr::BinOp::Add:
          case Expr::BinOp::Sub:
          case Expr::BinOp::Mul:
          case Expr::BinOp::Div:
            if (!(numeric(*lhs) && numeric(*rhs))) {
              report(e.span, "arithmetic needs numeric operands");
              return std::nullopt;
            }
            return (*lhs == PropertyType::Integer && *rhs == PropertyType::Integer)
                       ? PropertyType::Integer
                       : PropertyType::Real;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  static std::optional<PropertyType> resultTypeOf(Expr::BinOp op,
                                                  std::optional<PropertyType>,
                                                  std::optional<PropertyType>) {
    switch (op) {
      case Expr::BinOp::Add:
      case Expr::BinOp::Sub:
      case Expr::BinOp::Mul:
      case Expr::BinOp::Div: return std::nullopt;
      default: return PropertyType::Boolean;
    }
  }

  void checkBoolExpr(const Expr& e, const char* where) {
    auto t = checkExpr(e);
    if (t && *t != PropertyType::Boolean)
      report(e.span, std::string(where) + " condition must be boolean");
  }

  void checkEffects(const std::vector<Effect>& effects) {
    for (const auto& e : effects) {
      switch (e.kind) {
        case Effect::Kind::Set: {
          std::string cls = carrierClass(e.a, e.span);
          if (cls.empty()) break;
          auto target = propertyType(e.a, cls, e.b, e.span);
          auto value = checkExpr(*e.value);
          if (target && value) {
            bool ok = *target == *value ||
                      (*target == PropertyType::Real && *value == PropertyType::Integer);
            if (!ok)
              report(e.span, "cannot assign " + std::string(propertyTypeName(*value)) +
                                 " to " + std::string(propertyTypeName(*target)) +
                                 " property \"" + e.b + "\"");
          }
          break;
        }
        case Effect::Kind::Move:
          carrierClass(e.a, e.span);
          carrierClass(e.b, e.span);
          break;
        case Effect::Kind::Create:
          if (!classKnown(e.b))
            report(e.span, "unknown class \"" + e.b + "\" in create");
          else {
            auto chain = chainOf(e.b);
            if (!chain.empty() && chain.back() == "Agent")
              report(e.span, "cannot create agent objects");
          }
          carrierClass(e.c, e.span);
          break;
        case Effect::Kind::Destroy:
          carrierClass(e.a, e.span);
          break;
        case Effect::Kind::AddScore:
        case Effect::Kind::Say:
          break;
      }
    }
  }

  static std::string skeleton(const std::vector<PatternToken>& pattern) {
    std::string out;
    for (const auto& t : pattern) {
      if (!out.empty()) out += ' ';
      out += t.isSlot ? "_" : t.text;
    }
    return out;
  }

  void checkActions() {
    std::set<std::string> skeletons = {
        "look around", "look at _", "inventory", "take _", "put _ in _",
        "open _", "close _", "turn on _", "turn off _", "wait"};
    for (const auto& a : def.actionDecls) {
      std::map<std::string, std::string> slotScope;
      for (const auto& t : a.pattern) {
        if (!t.isSlot) continue;
        if (!classKnown(t.className))
          report(a.span, "unknown class \"" + t.className + "\" in pattern slot");
        if (!slotScope.emplace(t.text, t.className).second)
          report(a.span, "duplicate slot name \"" + t.text + "\" in pattern");
      }
      if (!skeletons.insert(skeleton(a.pattern)).second)
        report(a.span, "duplicate action pattern \"" + a.patternText() + "\"");
      scopes.push_back(slotScope);
      if (a.precondition) checkBoolExpr(*a.precondition, "require");
      checkEffects(a.effects);
      scopes.pop_back();
    }
  }

  std::vector<ParseDiagnostic> run() {
    collectClasses();
    collectObjects();
    checkActions();
    for (const auto& r : def.tickRules) {
      checkBoolExpr(r.condition, "every turn");
      checkEffects(r.effects);
    }
    if (def.winConditions.empty())
      report({1, 1}, "game has no win condition");
    for (const auto& w : def.winConditions) checkBoolExpr(w.condition, "win");
    for (const auto& l : def.loseConditions) checkBoolExpr(l.condition, "lose");

    std::stable_sort(diags.begin(), diags.end(), [](const auto& a, const auto& b) {
      return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    return std::move(diags);
  }
};

} // namespace

std::vector<ParseDiagnostic> validateSemantics(const GameDef& def) {
  return Checker(def).run();
}

} // namespace worldforge

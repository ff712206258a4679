#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "worldforge/diagnostics.hpp"
#include "worldforge/property.hpp"

namespace worldforge {

// Names of the five engine base classes games may build on.
bool isEngineBaseClass(std::string_view name);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr {
  enum class Kind {
    BoolLit,
    IntLit,
    RealLit,
    TextLit,
    Prop,   // name.prop        (name = declared object or bound variable)
    Not,
    Neg,
    Binary,
    In,     // in(inner, outer) (transitive containment, both object refs)
    Exists, // exists v: Class (body)
    Forall, // forall v: Class (body)
  };
  enum class BinOp { And, Or, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

  Kind kind = Kind::BoolLit;
  BinOp op = BinOp::And;
  bool boolValue = false;
  std::int64_t intValue = 0;
  double realValue = 0.0;
  std::string text;   // TextLit value | Prop object name | In inner | quantifier var
  std::string text2;  // Prop property name | In outer | quantifier class
  std::vector<Expr> kids;
  SourceSpan span;

  // Semantic equality; source spans are ignored.
  friend bool operator==(const Expr& a, const Expr& b);
};

Expr makeBoolLit(bool v);

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct PropAssign {
  std::string key;
  PropertyValue value;
  SourceSpan span;
  friend bool operator==(const PropAssign& a, const PropAssign& b) {
    return a.key == b.key && a.value == b.value;
  }
};

struct ClassDecl {
  std::string name;
  std::string base;
  std::vector<PropAssign> defaults;
  SourceSpan span;
  friend bool operator==(const ClassDecl& a, const ClassDecl& b) {
    return a.name == b.name && a.base == b.base && a.defaults == b.defaults;
  }
};

struct ObjectDecl {
  std::string name; // declared identifier; also the default display name
  std::string className;
  std::optional<std::string> container; // absent = directly in the world
  std::vector<PropAssign> assigns;      // may include the reserved "name" key
  SourceSpan span;
  friend bool operator==(const ObjectDecl& a, const ObjectDecl& b) {
    return a.name == b.name && a.className == b.className &&
           a.container == b.container && a.assigns == b.assigns;
  }
};

struct PatternToken {
  bool isSlot = false;
  std::string text;      // literal word, or slot variable name
  std::string className; // slot class (empty for literals)
  friend bool operator==(const PatternToken& a, const PatternToken& b) {
    return a.isSlot == b.isSlot && a.text == b.text && a.className == b.className;
  }
};

struct Effect {
  enum class Kind { Set, Move, Create, Destroy, AddScore, Say };
  Kind kind = Kind::Say;
  // Set:      a=object/var, b=property, value
  // Move:     a=object/var, b=target container
  // Create:   a=display name (string), b=class, c=target container
  // Destroy:  a=object/var
  // AddScore: amount
  // Say:      a=text
  std::string a, b, c;
  std::optional<Expr> value;
  std::int64_t amount = 0;
  SourceSpan span;
  friend bool operator==(const Effect& x, const Effect& y) {
    return x.kind == y.kind && x.a == y.a && x.b == y.b && x.c == y.c &&
           x.value == y.value && x.amount == y.amount;
  }
};

struct ActionDecl {
  std::vector<PatternToken> pattern;
  std::optional<Expr> precondition;
  std::optional<std::string> failMessage; // `require ... else "text"`
  std::vector<Effect> effects;
  SourceSpan span;

  std::string patternText() const; // canonical "take {x:GameObject}" form
  std::string verb() const;        // literal words before the first slot
  friend bool operator==(const ActionDecl& a, const ActionDecl& b) {
    return a.pattern == b.pattern && a.precondition == b.precondition &&
           a.failMessage == b.failMessage && a.effects == b.effects;
  }
};

struct TickRule {
  Expr condition; // BoolLit(true) when no `if` clause was written
  std::vector<Effect> effects;
  SourceSpan span;
  friend bool operator==(const TickRule& a, const TickRule& b) {
    return a.condition == b.condition && a.effects == b.effects;
  }
};

struct WinCondition {
  Expr condition;
  std::int64_t scoreDelta = 1;
  SourceSpan span;
  friend bool operator==(const WinCondition& a, const WinCondition& b) {
    return a.condition == b.condition && a.scoreDelta == b.scoreDelta;
  }
};

struct LoseCondition {
  Expr condition;
  SourceSpan span;
  friend bool operator==(const LoseCondition& a, const LoseCondition& b) {
    return a.condition == b.condition;
  }
};

struct GameDef {
  std::string gameName;
  std::string taskText;
  std::vector<ClassDecl> classDecls;
  std::vector<ObjectDecl> objectDecls;
  std::vector<ActionDecl> actionDecls;
  std::vector<TickRule> tickRules;
  std::vector<WinCondition> winConditions;
  std::vector<LoseCondition> loseConditions;

  friend bool operator==(const GameDef& a, const GameDef& b) {
    return a.gameName == b.gameName && a.taskText == b.taskText &&
           a.classDecls == b.classDecls && a.objectDecls == b.objectDecls &&
           a.actionDecls == b.actionDecls && a.tickRules == b.tickRules &&
           a.winConditions == b.winConditions && a.loseConditions == b.loseConditions;
  }
};

} // namespace worldforge

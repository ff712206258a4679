#include "worldforge/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace worldforge {

bool isEngineBaseClass(std::string_view name) {
  return name == "GameObject" || name == "Container" || name == "Device" ||
         name == "Substance" || name == "Agent";
}

Expr makeBoolLit(bool v) {
  Expr e;
  e.kind = Expr::Kind::BoolLit;
  e.boolValue = v;
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::BoolLit: return a.boolValue == b.boolValue;
    case Expr::Kind::IntLit: return a.intValue == b.intValue;
    case Expr::Kind::RealLit: return a.realValue == b.realValue;
    case Expr::Kind::TextLit: return a.text == b.text;
    case Expr::Kind::Prop: return a.text == b.text && a.text2 == b.text2;
    case Expr::Kind::In: return a.text == b.text && a.text2 == b.text2;
    case Expr::Kind::Not:
    case Expr::Kind::Neg: return a.kids == b.kids;
    case Expr::Kind::Binary: return a.op == b.op && a.kids == b.kids;
    case Expr::Kind::Exists:
    case Expr::Kind::Forall:
      return a.text == b.text && a.text2 == b.text2 && a.kids == b.kids;
  }
  return false;
}

std::string ActionDecl::patternText() const {
  std::string out;
  for (const auto& t : pattern) {
    if (!out.empty()) out += ' ';
    if (t.isSlot)
      out += "{" + t.text + ":" + t.className + "}";
    else
      out += t.text;
  }
  return out;
}

std::string ActionDecl::verb() const {
  std::string out;
  for (const auto& t : pattern) {
    if (t.isSlot) break;
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  End, Ident, String, Int, Real,
  LBrace, RBrace, LParen, RParen, Colon, Comma, Dot, Assign,
  Plus, Minus, Star, Slash, Lt, Le, Gt, Ge, Eq, Ne,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;     // identifier or string payload
  std::int64_t intValue = 0;
  double realValue = 0.0;
  SourceSpan span;
};

struct ParseAbort {};

class Lexer {
public:
  Lexer(std::string_view src, std::vector<ParseDiagnostic>& diags)
      : src_(src), diags_(diags) {
    std::string line;
    std::istringstream in{std::string(src)};
    while (std::getline(in, line)) lines_.push_back(line);
    if (lines_.empty()) lines_.push_back("");
  }

  std::string lineText(int line) const {
    if (line < 1 || line > static_cast<int>(lines_.size())) return "";
    std::string t = lines_[line - 1];
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return t.substr(b, e - b + 1);
  }

  [[noreturn]] void fail(SourceSpan span, const std::string& message) {
    diags_.push_back({span.line, span.column, message, lineText(span.line)});
    throw ParseAbort{};
  }

  Token next() {
    skipTrivia();
    Token t;
    t.span = {line_, col_};
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lexNumber(t);
    switch (c) {
      case '"': return lexString(t);
      case '{': advance(); t.kind = Tok::LBrace; return t;
      case '}': advance(); t.kind = Tok::RBrace; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case ':': advance(); t.kind = Tok::Colon; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '+': advance(); t.kind = Tok::Plus; return t;
      case '-': advance(); t.kind = Tok::Minus; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case '/': advance(); t.kind = Tok::Slash; return t;
      case '=':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Eq; } else { t.kind = Tok::Assign; }
        return t;
      case '!':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Ne; return t; }
        fail(t.span, "unexpected character '!'");
      case '<':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Le; } else { t.kind = Tok::Lt; }
        return t;
      case '>':
        advance();
        if (peek() == '=') { advance(); t.kind = Tok::Ge; } else { t.kind = Tok::Gt; }
        return t;
      default:
        fail(t.span, std::string("unexpected character '") + c + "'");
    }
  }

private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void advance() {
    if (pos_ < src_.size()) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skipTrivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  Token lexNumber(Token t) {
    size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    bool isReal = false;
    if (peek() == '.' && pos_ + 1 < src_.size() &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      isReal = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      size_t save = pos_;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        isReal = true;
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      } else {
        pos_ = save; // not an exponent; leave 'e' for the next token
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    if (peek() == '.' || std::isalpha(static_cast<unsigned char>(peek())))
      fail(t.span, "malformed number '" + text + "'");
    if (isReal) {
      t.kind = Tok::Real;
      t.realValue = std::strtod(text.c_str(), nullptr);
    } else {
      t.kind = Tok::Int;
      std::from_chars(text.data(), text.data() + text.size(), t.intValue);
    }
    return t;
  }

  Token lexString(Token t) {
    advance(); // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n')
        fail(t.span, "unterminated string literal");
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        char e = peek();
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail({line_, col_}, std::string("unknown escape '\\") + e + "'");
        }
        advance();
      } else {
        out += c;
        advance();
      }
    }
    t.kind = Tok::String;
    t.text = out;
    return t;
  }

  std::string_view src_;
  std::vector<ParseDiagnostic>& diags_;
  std::vector<std::string> lines_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
  Parser(std::string_view src, std::vector<ParseDiagnostic>& diags)
      : lex_(src, diags) {
    cur_ = lex_.next();
  }

  GameDef parseGame() {
    GameDef def;
    expectKeyword("game");
    def.gameName = expect(Tok::String, "game name string").text;
    expect(Tok::LBrace, "'{' to open the game block");
    bool sawTask = false;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("unclosed game block; expected '}'");
      Token kw = expect(Tok::Ident, "a declaration keyword");
      const std::string& k = kw.text;
      if (k == "task") {
        if (sawTask) fail(kw.span, "duplicate task declaration");
        sawTask = true;
        def.taskText = expect(Tok::String, "task description string").text;
      } else if (k == "class") {
        def.classDecls.push_back(parseClass(kw.span));
      } else if (k == "object") {
        def.objectDecls.push_back(parseObject(kw.span));
      } else if (k == "action") {
        def.actionDecls.push_back(parseAction(kw.span));
      } else if (k == "every") {
        expectKeyword("turn");
        def.tickRules.push_back(parseTickRule(kw.span));
      } else if (k == "win") {
        expectKeyword("if");
        WinCondition w;
        w.span = kw.span;
        w.condition = parseExpr();
        if (atIdent("score")) {
          consume();
          w.scoreDelta = parseSignedInt();
        }
        def.winConditions.push_back(std::move(w));
      } else if (k == "lose") {
        expectKeyword("if");
        LoseCondition l;
        l.span = kw.span;
        l.condition = parseExpr();
        def.loseConditions.push_back(std::move(l));
      } else {
        fail(kw.span, "unknown declaration '" + k + "' (expected task, class, "
                      "object, action, every turn, win, or lose)");
      }
    }
    consume(); // '}'
    if (!at(Tok::End)) fail("trailing input after the game block");
    if (!sawTask) fail("missing task declaration");
    return def;
  }

private:
  bool at(Tok k) const { return cur_.kind == k; }
  bool atIdent(std::string_view name) const {
    return cur_.kind == Tok::Ident && cur_.text == name;
  }

  Token consume() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  Token expect(Tok k, const std::string& what) {
    if (cur_.kind != k) fail("expected " + what);
    return consume();
  }

  void expectKeyword(std::string_view name) {
    if (!atIdent(name)) fail("expected '" + std::string(name) + "'");
    consume();
  }

  [[noreturn]] void fail(const std::string& message) { lex_.fail(cur_.span, message); }
  [[noreturn]] void fail(SourceSpan span, const std::string& message) {
    lex_.fail(span, message);
  }

  std::int64_t parseSignedInt() {
    bool neg = false;
    if (at(Tok::Minus)) {
      consume();
      neg = true;
    }
    Token t = expect(Tok::Int, "an integer");
    return neg ? -t.intValue : t.intValue;
  }

  PropertyValue parseLiteral() {
    if (at(Tok::String)) return PropertyValue(consume().text);
    if (at(Tok::Int)) return PropertyValue(consume().intValue);
    if (at(Tok::Real)) return PropertyValue(consume().realValue);
    if (at(Tok::Minus)) {
      consume();
      if (at(Tok::Int)) return PropertyValue(-consume().intValue);
      if (at(Tok::Real)) return PropertyValue(-consume().realValue);
      fail("expected a number after '-'");
    }
    if (atIdent("true")) { consume(); return PropertyValue(true); }
    if (atIdent("false")) { consume(); return PropertyValue(false); }
    fail("expected a literal (string, number, true, or false)");
  }

  std::vector<PropAssign> parseAssignBlock() {
    std::vector<PropAssign> out;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("unclosed block; expected '}'");
      PropAssign a;
      Token name = expect(Tok::Ident, "a property name");
      a.key = name.text;
      a.span = name.span;
      expect(Tok::Assign, "'=' after property name");
      a.value = parseLiteral();
      out.push_back(std::move(a));
    }
    consume();
    return out;
  }

  ClassDecl parseClass(SourceSpan span) {
    ClassDecl c;
    c.span = span;
    c.name = expect(Tok::Ident, "a class name").text;
    expect(Tok::Colon, "':' and a base class");
    c.base = expect(Tok::Ident, "a base class name").text;
    c.defaults = parseAssignBlock();
    return c;
  }

  ObjectDecl parseObject(SourceSpan span) {
    ObjectDecl o;
    o.span = span;
    o.name = expect(Tok::Ident, "an object name").text;
    expect(Tok::Colon, "':' and a class name");
    o.className = expect(Tok::Ident, "a class name").text;
    if (atIdent("in")) {
      consume();
      o.container = expect(Tok::Ident, "a container object name").text;
    }
    if (at(Tok::LBrace)) o.assigns = parseAssignBlock();
    return o;
  }

  std::vector<PatternToken> parsePattern(const Token& str) {
    std::vector<PatternToken> out;
    std::istringstream in(str.text);
    std::string word;
    while (in >> word) {
      PatternToken t;
      if (word.front() == '{') {
        if (word.back() != '}')
          fail(str.span, "slot '" + word + "' must look like {name:Class}");
        std::string inner = word.substr(1, word.size() - 2);
        size_t colon = inner.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= inner.size())
          fail(str.span, "slot '" + word + "' must look like {name:Class}");
        t.isSlot = true;
        t.text = inner.substr(0, colon);
        t.className = inner.substr(colon + 1);
      } else {
        t.text = word;
      }
      out.push_back(std::move(t));
    }
    if (out.empty()) fail(str.span, "action pattern must not be empty");
    return out;
  }

  ActionDecl parseAction(SourceSpan span) {
    ActionDecl a;
    a.span = span;
    Token pat = expect(Tok::String, "an action pattern string");
    a.pattern = parsePattern(pat);
    expect(Tok::LBrace, "'{' to open the action body");
    if (atIdent("require")) {
      Token req = consume();
      a.precondition = parseExpr();
      a.precondition->span = req.span;
      if (atIdent("else")) {
        consume();
        a.failMessage = expect(Tok::String, "a failure message string").text;
      }
    }
    a.effects = parseEffects();
    return a;
  }

  TickRule parseTickRule(SourceSpan span) {
    TickRule r;
    r.span = span;
    if (atIdent("if")) {
      consume();
      r.condition = parseExpr();
    } else {
      r.condition = makeBoolLit(true);
    }
    expect(Tok::LBrace, "'{' to open the rule body");
    r.effects = parseEffects();
    return r;
  }

  // Consumes effects until the closing '}' (which is consumed too).
  std::vector<Effect> parseEffects() {
    std::vector<Effect> out;
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail("unclosed body; expected '}'");
      Token kw = expect(Tok::Ident, "an effect (set, move, create, destroy, addscore, say)");
      Effect e;
      e.span = kw.span;
      const std::string& k = kw.text;
      if (k == "set") {
        e.kind = Effect::Kind::Set;
        e.a = expect(Tok::Ident, "an object name").text;
        expect(Tok::Dot, "'.' and a property name");
        e.b = expect(Tok::Ident, "a property name").text;
        expect(Tok::Assign, "'='");
        e.value = parseExpr();
      } else if (k == "move") {
        e.kind = Effect::Kind::Move;
        e.a = expect(Tok::Ident, "an object name").text;
        expectKeyword("to");
        e.b = expect(Tok::Ident, "a container name").text;
      } else if (k == "create") {
        e.kind = Effect::Kind::Create;
        e.a = expect(Tok::String, "a display name string").text;
        expect(Tok::Colon, "':' and a class name");
        e.b = expect(Tok::Ident, "a class name").text;
        expectKeyword("in");
        e.c = expect(Tok::Ident, "a container name").text;
      } else if (k == "destroy") {
        e.kind = Effect::Kind::Destroy;
        e.a = expect(Tok::Ident, "an object name").text;
      } else if (k == "addscore") {
        e.kind = Effect::Kind::AddScore;
        e.amount = parseSignedInt();
      } else if (k == "say") {
        e.kind = Effect::Kind::Say;
        e.a = expect(Tok::String, "a message string").text;
      } else if (k == "require") {
        fail(kw.span, "'require' must be the first statement of an action body");
      } else {
        fail(kw.span, "unknown effect '" + k + "'");
      }
      out.push_back(std::move(e));
    }
    consume();
    return out;
  }

  // Expressions -------------------------------------------------------------

  Expr parseExpr() { return parseOr(); }

  Expr binary(Expr::BinOp op, Expr lhs, Expr rhs, SourceSpan span) {
    Expr e;
    e.kind = Expr::Kind::Binary;
    e.op = op;
    e.span = span;
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    return e;
  }

  Expr parseOr() {
    Expr lhs = parseAnd();
    while (atIdent("or")) {
      SourceSpan sp = consume().span;
      lhs = binary(Expr::BinOp::Or, std::move(lhs), parseAnd(), sp);
    }
    return lhs;
  }

  Expr parseAnd() {
    Expr lhs = parseNot();
    while (atIdent("and")) {
      SourceSpan sp = consume().span;
      lhs = binary(Expr::BinOp::And, std::move(lhs), parseNot(), sp);
    }
    return lhs;
  }

  Expr parseNot() {
    if (atIdent("not")) {
      Expr e;
      e.span = consume().span;
      e.kind = Expr::Kind::Not;
      e.kids.push_back(parseNot());
      return e;
    }
    return parseCmp();
  }

  Expr parseCmp() {
    Expr lhs = parseAdd();
    Expr::BinOp op;
    switch (cur_.kind) {
      case Tok::Eq: op = Expr::BinOp::Eq; break;
      case Tok::Ne: op = Expr::BinOp::Ne; break;
      case Tok::Lt: op = Expr::BinOp::Lt; break;
      case Tok::Le: op = Expr::BinOp::Le; break;
      case Tok::Gt: op = Expr::BinOp::Gt; break;
      case Tok::Ge: op = Expr::BinOp::Ge; break;
      default: return lhs;
    }
    SourceSpan sp = consume().span;
    return binary(op, std::move(lhs), parseAdd(), sp);
  }

  Expr parseAdd() {
    Expr lhs = parseMul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Expr::BinOp op = at(Tok::Plus) ? Expr::BinOp::Add : Expr::BinOp::Sub;
      SourceSpan sp = consume().span;
      lhs = binary(op, std::move(lhs), parseMul(), sp);
    }
    return lhs;
  }

  Expr parseMul() {
    Expr lhs = parseUnary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Expr::BinOp op = at(Tok::Star) ? Expr::BinOp::Mul : Expr::BinOp::Div;
      SourceSpan sp = consume().span;
      lhs = binary(op, std::move(lhs), parseUnary(), sp);
    }
    return lhs;
  }

  Expr parseUnary() {
    if (at(Tok::Minus)) {
      Expr e;
      e.span = consume().span;
      e.kind = Expr::Kind::Neg;
      e.kids.push_back(parseUnary());
      return e;
    }
    return parsePrimary();
  }

  Expr parsePrimary() {
    Expr e;
    e.span = cur_.span;
    if (at(Tok::LParen)) {
      consume();
      Expr inner = parseExpr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (at(Tok::Int)) { e.kind = Expr::Kind::IntLit; e.intValue = consume().intValue; return e; }
    if (at(Tok::Real)) { e.kind = Expr::Kind::RealLit; e.realValue = consume().realValue; return e; }
    if (at(Tok::String)) { e.kind = Expr::Kind::TextLit; e.text = consume().text; return e; }
    if (!at(Tok::Ident)) fail("expected an expression");
    Token id = consume();
    if (id.text == "true") { e.kind = Expr::Kind::BoolLit; e.boolValue = true; return e; }
    if (id.text == "false") { e.kind = Expr::Kind::BoolLit; e.boolValue = false; return e; }
    if (id.text == "in") {
      expect(Tok::LParen, "'(' after in");
      e.kind = Expr::Kind::In;
      e.text = expect(Tok::Ident, "an object name").text;
      expect(Tok::Comma, "','");
      e.text2 = expect(Tok::Ident, "an object name").text;
      expect(Tok::RParen, "')'");
      return e;
    }
    if (id.text == "exists" || id.text == "forall") {
      e.kind = id.text == "exists" ? Expr::Kind::Exists : Expr::Kind::Forall;
      e.text = expect(Tok::Ident, "a variable name").text;
      expect(Tok::Colon, "':' and a class name");
      e.text2 = expect(Tok::Ident, "a class name").text;
      expect(Tok::LParen, "'(' around the quantifier body");
      e.kids.push_back(parseExpr());
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Dot)) {
      consume();
      e.kind = Expr::Kind::Prop;
      e.text = id.text;
      e.text2 = expect(Tok::Ident, "a property name").text;
      return e;
    }
    fail(id.span, "bare identifier '" + id.text +
                      "'; expected a property access like " + id.text + ".prop");
  }

  Lexer lex_;
  Token cur_;
};

} // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  try {
    Parser p(source, result.diagnostics);
    result.def = p.parseGame();
  } catch (const ParseAbort&) {
    result.def.reset();
    if (result.diagnostics.empty())
      result.diagnostics.push_back({1, 1, "parse failed", ""});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Pretty-printer
// ---------------------------------------------------------------------------

namespace {

int precedenceOf(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      switch (e.op) {
        case Expr::BinOp::Or: return 1;
        case Expr::BinOp::And: return 2;
        case Expr::BinOp::Eq:
        case Expr::BinOp::Ne:
        case Expr::BinOp::Lt:
        case Expr::BinOp::Le:
        case Expr::BinOp::Gt:
        case Expr::BinOp::Ge: return 4;
        case Expr::BinOp::Add:
        case Expr::BinOp::Sub: return 5;
        case Expr::BinOp::Mul:
        case Expr::BinOp::Div: return 6;
      }
      return 0;
    case Expr::Kind::Not: return 3;
    case Expr::Kind::Neg: return 7;
    default: return 8; // primaries never need parentheses
  }
}

std::string_view binOpText(Expr::BinOp op) {
  switch (op) {
    case Expr::BinOp::And: return "and";
    case Expr::BinOp::Or: return "or";
    case Expr::BinOp::Eq: return "==";
    case Expr::BinOp::Ne: return "!=";
    case Expr::BinOp::Lt: return "<";
    case Expr::BinOp::Le: return "<=";
    case Expr::BinOp::Gt: return ">";
    case Expr::BinOp::Ge: return ">=";
    case Expr::BinOp::Add: return "+";
    case Expr::BinOp::Sub: return "-";
    case Expr::BinOp::Mul: return "*";
    case Expr::BinOp::Div: return "/";
  }
  return "?";
}

void printExprTo(std::string& out, const Expr& e, int parentPrec, bool rightChild) {
  int prec = precedenceOf(e);
  bool parens = prec < parentPrec || (prec == parentPrec && rightChild);
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::BoolLit: out += e.boolValue ? "true" : "false"; break;
    case Expr::Kind::IntLit: out += std::to_string(e.intValue); break;
    case Expr::Kind::RealLit: out += formatReal(e.realValue); break;
    case Expr::Kind::TextLit: out += formatPropertyValue(PropertyValue(e.text)); break;
    case Expr::Kind::Prop: out += e.text + "." + e.text2; break;
    case Expr::Kind::In: out += "in(" + e.text + ", " + e.text2 + ")"; break;
    case Expr::Kind::Not:
      out += "not ";
      printExprTo(out, e.kids[0], precedenceOf(e), false);
      break;
    case Expr::Kind::Neg:
      out += '-';
      printExprTo(out, e.kids[0], precedenceOf(e), false);
      break;
    case Expr::Kind::Binary: {
      printExprTo(out, e.kids[0], prec, false);
      out += ' ';
      out += binOpText(e.op);
      out += ' ';
      printExprTo(out, e.kids[1], prec, true);
      break;
    }
    case Expr::Kind::Exists:
    case Expr::Kind::Forall: {
      out += e.kind == Expr::Kind::Exists ? "exists " : "forall ";
      out += e.text + ": " + e.text2 + " (";
      printExprTo(out, e.kids[0], 0, false);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

std::string quote(const std::string& s) { return formatPropertyValue(PropertyValue(s)); }

void printAssigns(std::string& out, const std::vector<PropAssign>& assigns,
                  const std::string& indent) {
  out += " {";
  if (assigns.empty()) {
    out += "}\n";
    return;
  }
  out += '\n';
  for (const auto& a : assigns)
    out += indent + "  " + a.key + " = " + formatPropertyValue(a.value) + "\n";
  out += indent + "}\n";
}

void printEffects(std::string& out, const std::vector<Effect>& effects,
                  const std::string& indent) {
  for (const auto& e : effects) {
    out += indent;
    switch (e.kind) {
      case Effect::Kind::Set:
        out += "set " + e.a + "." + e.b + " = ";
        printExprTo(out, *e.value, 0, false);
        break;
      case Effect::Kind::Move: out += "move " + e.a + " to " + e.b; break;
      case Effect::Kind::Create:
        out += "create " + quote(e.a) + " : " + e.b + " in " + e.c;
        break;
      case Effect::Kind::Destroy: out += "destroy " + e.a; break;
      case Effect::Kind::AddScore: out += "addscore " + std::to_string(e.amount); break;
      case Effect::Kind::Say: out += "say " + quote(e.a); break;
    }
    out += '\n';
  }
}

} // namespace

std::string printExpr(const Expr& e) {
  std::string out;
  printExprTo(out, e, 0, false);
  return out;
}

std::string prettyPrint(const GameDef& def) {
  std::string out = "game " + quote(def.gameName) + " {\n";
  out += "  task " + quote(def.taskText) + "\n";
  for (const auto& c : def.classDecls) {
    out += "\n  class " + c.name + " : " + c.base;
    printAssigns(out, c.defaults, "  ");
  }
  if (!def.objectDecls.empty()) out += '\n';
  for (const auto& o : def.objectDecls) {
    out += "  object " + o.name + " : " + o.className;
    if (o.container) out += " in " + *o.container;
    if (o.assigns.empty())
      out += "\n";
    else
      printAssigns(out, o.assigns, "  ");
  }
  for (const auto& a : def.actionDecls) {
    out += "\n  action " + quote(a.patternText()) + " {\n";
    if (a.precondition) {
      out += "    require ";
      printExprTo(out, *a.precondition, 0, false);
      if (a.failMessage) out += " else " + quote(*a.failMessage);
      out += '\n';
    }
    printEffects(out, a.effects, "    ");
    out += "  }\n";
  }
  for (const auto& r : def.tickRules) {
    out += "\n  every turn";
    if (!(r.condition.kind == Expr::Kind::BoolLit && r.condition.boolValue)) {
      out += " if ";
      printExprTo(out, r.condition, 0, false);
    }
    out += " {\n";
    printEffects(out, r.effects, "    ");
    out += "  }\n";
  }
  if (!def.winConditions.empty() || !def.loseConditions.empty()) out += '\n';
  for (const auto& w : def.winConditions) {
    out += "  win if ";
    printExprTo(out, w.condition, 0, false);
    out += " score " + std::to_string(w.scoreDelta) + "\n";
  }
  for (const auto& l : def.loseConditions) {
    out += "  lose if ";
    printExprTo(out, l.condition, 0, false);
    out += '\n';
  }
  out += "}\n";
  return out;
}

} // namespace worldforge

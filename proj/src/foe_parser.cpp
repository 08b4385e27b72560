#include "procast/foe_parser.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "procast/errors.hpp"
#include "procast/foe_checks.hpp"

namespace procast::foe {

namespace {

enum class Tok {
  Ident, Number, String,
  KwForall, KwExists, KwAnd, KwOr, KwNot, KwTrue, KwFalse, KwUndefined, KwCurr, KwLast,
  Lt, Gt, Le, Ge, Eq, Ne, Arrow, FatArrow, Plus, Minus,
  LParen, RParen, LBracket, RBracket, Dot, Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;      // Ident payload / String payload
  double num = 0;        // Number payload
  bool is_integer = false;
  long long int_value = 0;
  std::size_t line = 1, col = 1;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::KwForall: return "'forall'";
    case Tok::KwExists: return "'exists'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwNot: return "'not'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwUndefined: return "'undefined'";
    case Tok::KwCurr: return "'curr'";
    case Tok::KwLast: return "'last'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == ':';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;

  auto advance = [&](std::size_t n = 1) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto fail = [&](const std::string& msg, std::size_t l, std::size_t c) -> void {
    throw ParseError(msg, l, c);
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '#') {  // line comment
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }

    Token t;
    t.line = line;
    t.col = col;

    if (ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && ident_char(src[i])) advance();
      t.text = std::string(src.substr(start, i - start));
      if (t.text == "forall") t.kind = Tok::KwForall;
      else if (t.text == "exists") t.kind = Tok::KwExists;
      else if (t.text == "and") t.kind = Tok::KwAnd;
      else if (t.text == "or") t.kind = Tok::KwOr;
      else if (t.text == "not") t.kind = Tok::KwNot;
      else if (t.text == "true") t.kind = Tok::KwTrue;
      else if (t.text == "false") t.kind = Tok::KwFalse;
      else if (t.text == "undefined") t.kind = Tok::KwUndefined;
      else if (t.text == "curr") t.kind = Tok::KwCurr;
      else if (t.text == "last") t.kind = Tok::KwLast;
      else t.kind = Tok::Ident;
      out.push_back(std::move(t));
      continue;
    }

    if (c >= '0' && c <= '9') {
      std::string digits;
      bool fraction = false;
      while (i < src.size() &&
             ((src[i] >= '0' && src[i] <= '9') || src[i] == '_' ||
              (src[i] == '.' && !fraction && i + 1 < src.size() && src[i + 1] >= '0' &&
               src[i + 1] <= '9'))) {
        if (src[i] == '.') fraction = true;
        if (src[i] != '_') digits += src[i];
        advance();
      }
      t.kind = Tok::Number;
      t.num = std::strtod(digits.c_str(), nullptr);
      t.is_integer = !fraction;
      if (t.is_integer) t.int_value = std::strtoll(digits.c_str(), nullptr, 10);
      out.push_back(std::move(t));
      continue;
    }

    if (c == '"') {
      advance();
      std::string value;
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance();
          closed = true;
          break;
        }
        if (d == '\\') {
          advance();
          if (i >= src.size()) break;
          char e = src[i];
          switch (e) {
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case 'r': value += '\r'; break;
            default:
              fail(std::string("unknown escape '\\") + e + "' in string", line, col);
          }
          advance();
          continue;
        }
        value += d;
        advance();
      }
      if (!closed) fail("unterminated string literal", t.line, t.col);
      t.kind = Tok::String;
      t.text = std::move(value);
      out.push_back(std::move(t));
      continue;
    }

    auto two = [&](char second) { return i + 1 < src.size() && src[i + 1] == second; };
    switch (c) {
      case '<': t.kind = two('=') ? Tok::Le : Tok::Lt; break;
      case '>': t.kind = two('=') ? Tok::Ge : Tok::Gt; break;
      case '=':
        if (two('>')) t.kind = Tok::FatArrow;
        else if (two('=')) t.kind = Tok::Eq;
        else t.kind = Tok::Eq;
        break;
      case '!':
        if (!two('=')) fail("expected '=' after '!'", line, col);
        t.kind = Tok::Ne;
        break;
      case '-': t.kind = two('>') ? Tok::Arrow : Tok::Minus; break;
      case '+': t.kind = Tok::Plus; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case '.': t.kind = Tok::Dot; break;
      case ',': t.kind = Tok::Comma; break;
      default:
        fail(std::string("unexpected character '") + c + "'", line, col);
    }
    switch (t.kind) {
      case Tok::Le: case Tok::Ge: case Tok::FatArrow: case Tok::Arrow: advance(2); break;
      case Tok::Eq: advance(two('=') ? 2 : 1); break;
      case Tok::Ne: advance(2); break;
      default: advance(1); break;
    }
    out.push_back(std::move(t));
  }

  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  std::unique_ptr<Formula> formula() {
    auto f = parse_formula();
    expect(Tok::End, "end of formula");
    return f;
  }

  AnalyticRule rule() {
    AnalyticRule r;
    expect(Tok::Lt, "'<' opening the rule");
    for (;;) {
      std::size_t save = pos_;
      std::unique_ptr<Formula> cond;
      bool is_pair = false;
      try {
        cond = parse_formula();
        is_pair = at(Tok::FatArrow);
      } catch (const ParseError&) {
        is_pair = false;
      }
      if (is_pair) {
        next();  // '=>'
        Target target = parse_target();
        r.pairs.push_back(RulePair{std::move(cond), std::move(target)});
        expect(Tok::Comma, "',' after a condition/target pair");
        continue;
      }
      pos_ = save;
      r.default_target = parse_target();
      expect(Tok::Gt, "'>' closing the rule");
      expect(Tok::End, "end of rule");
      return r;
    }
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + " (found " + tok_name(t.kind) + ")", t.line, t.col);
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }

  bool at_cmp() const {
    switch (peek().kind) {
      case Tok::Eq: case Tok::Ne: case Tok::Lt: case Tok::Gt: case Tok::Le: case Tok::Ge:
        return true;
      default:
        return false;
    }
  }

  Cmp cmp_op() {
    switch (next().kind) {
      case Tok::Eq: return Cmp::Eq;
      case Tok::Ne: return Cmp::Ne;
      case Tok::Lt: return Cmp::Lt;
      case Tok::Gt: return Cmp::Gt;
      case Tok::Le: return Cmp::Le;
      default: return Cmp::Ge;
    }
  }

  // formulas --------------------------------------------------------------

  std::unique_ptr<Formula> parse_formula() { return parse_implies(); }

  std::unique_ptr<Formula> parse_implies() {
    auto lhs = parse_or();
    if (at(Tok::Arrow)) {
      next();
      return Formula::make_binary(Formula::Kind::Implies, std::move(lhs), parse_implies());
    }
    return lhs;
  }

  std::unique_ptr<Formula> parse_or() {
    auto lhs = parse_and();
    while (at(Tok::KwOr)) {
      next();
      lhs = Formula::make_binary(Formula::Kind::Or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  std::unique_ptr<Formula> parse_and() {
    auto lhs = parse_unary();
    while (at(Tok::KwAnd)) {
      next();
      lhs = Formula::make_binary(Formula::Kind::And, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  std::unique_ptr<Formula> parse_unary() {
    if (at(Tok::KwNot)) {
      next();
      return Formula::make_not(parse_unary());
    }
    if (at(Tok::KwForall) || at(Tok::KwExists)) {
      const bool is_forall = next().kind == Tok::KwForall;
      const Token& var = expect(Tok::Ident, "an index variable after the quantifier");
      std::string name = var.text;
      expect(Tok::Dot, "'.' after the quantified variable");
      auto body = parse_formula();  // body extends as far right as possible
      return Formula::make_quant(is_forall ? Formula::Kind::Forall : Formula::Kind::Exists,
                                 std::move(name), std::move(body));
    }
    return parse_atom();
  }

  std::unique_ptr<Formula> parse_atom() {
    if (at(Tok::LParen)) {
      // '(' may open a parenthesized formula or a parenthesized value
      // expression; try the formula reading first and fall back.
      std::size_t save = pos_;
      try {
        next();
        auto f = parse_formula();
        expect(Tok::RParen, "')'");
        if (!at_cmp()) return f;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    auto lhs = parse_additive();
    if (at_cmp()) {
      Cmp op = cmp_op();
      auto rhs = parse_additive();
      return Formula::make_atom(std::move(lhs), op, std::move(rhs));
    }
    if (lhs->kind == Expr::Kind::BoolLit) return Formula::make_const(lhs->boolean);
    fail("expected a comparison operator");
  }

  // value expressions -------------------------------------------------------

  std::unique_ptr<Expr> parse_additive() {
    auto lhs = parse_primary();
    for (;;) {
      if (at(Tok::Plus)) {
        next();
        lhs = Expr::make_binary(Expr::Kind::Add, std::move(lhs), parse_primary());
      } else if (at(Tok::Minus)) {
        next();
        lhs = Expr::make_binary(Expr::Kind::Sub, std::move(lhs), parse_primary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Expr> parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        next();
        return Expr::make_num(t.num);
      case Tok::String:
        next();
        return Expr::make_str(t.text);
      case Tok::KwTrue:
        next();
        return Expr::make_bool(true);
      case Tok::KwFalse:
        next();
        return Expr::make_bool(false);
      case Tok::KwCurr:
        next();
        return Expr::make_index(IndexExpr::make_curr());
      case Tok::KwLast:
        next();
        return Expr::make_index(IndexExpr::make_last());
      case Tok::Ident: {
        if (t.text == "e" && toks_[pos_ + 1].kind == Tok::LBracket) return parse_accessor();
        next();
        return Expr::make_index(IndexExpr::make_var(t.text));
      }
      case Tok::LParen: {
        next();
        auto e = parse_additive();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("expected a value expression");
    }
  }

  std::unique_ptr<Expr> parse_accessor() {
    next();  // 'e'
    next();  // '['
    auto idx = parse_index();
    expect(Tok::RBracket, "']'");
    expect(Tok::Dot, "'.' before the attribute name");
    if (at(Tok::Ident)) {
      return Expr::make_accessor(std::move(idx), next().text);
    }
    if (at(Tok::String)) {
      return Expr::make_accessor(std::move(idx), next().text);
    }
    // keywords double as attribute names when they follow the accessor dot
    switch (peek().kind) {
      case Tok::KwCurr: case Tok::KwLast: case Tok::KwTrue: case Tok::KwFalse:
      case Tok::KwAnd: case Tok::KwOr: case Tok::KwNot: case Tok::KwForall:
      case Tok::KwExists: case Tok::KwUndefined:
        return Expr::make_accessor(std::move(idx), next().text);
      default:
        fail("expected an attribute name");
    }
  }

  // index expressions -------------------------------------------------------

  std::unique_ptr<IndexExpr> parse_index() {
    auto lhs = parse_index_term();
    for (;;) {
      if (at(Tok::Plus)) {
        next();
        lhs = IndexExpr::make_binary(IndexExpr::Kind::Add, std::move(lhs), parse_index_term());
      } else if (at(Tok::Minus)) {
        next();
        lhs = IndexExpr::make_binary(IndexExpr::Kind::Sub, std::move(lhs), parse_index_term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<IndexExpr> parse_index_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        if (!t.is_integer || t.int_value < 1) {
          fail("index literals must be positive integers");
        }
        next();
        return IndexExpr::make_lit(t.int_value);
      case Tok::Ident:
        next();
        return IndexExpr::make_var(t.text);
      case Tok::KwCurr:
        next();
        return IndexExpr::make_curr();
      case Tok::KwLast:
        next();
        return IndexExpr::make_last();
      case Tok::LParen: {
        next();
        auto e = parse_index();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("expected an index expression");
    }
  }

  Target parse_target() {
    if (at(Tok::KwUndefined)) {
      next();
      return Target{nullptr};
    }
    return Target{parse_additive()};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Formula> parse_formula(std::string_view text) {
  Parser p(text);
  auto f = p.formula();
  standardize_apart(*f);
  check_formula_kinds(*f);
  return f;
}

AnalyticRule parse_rule(std::string_view text) {
  Parser p(text);
  AnalyticRule r = p.rule();
  check_rule(r);
  return r;
}

AnalyticRule parse_rule_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_rule(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const StaticCheckError& e) {
    throw StaticCheckError(path + ": " + e.what());
  }
}

const char* grammar_ebnf() {
  return R"ebnf(rule      = "<" { formula "=>" target "," } target ">" ;
target    = "undefined" | expr ;
formula   = or { "->" formula } ;              (* right-associative *)
or        = and { "or" and } ;
and       = unary { "and" unary } ;
unary     = "not" unary
          | ("forall" | "exists") IDENT "." formula
          | atom ;
atom      = expr cmp expr | "true" | "false" | "(" formula ")" ;
cmp       = "=" | "==" | "!=" | "<" | ">" | "<=" | ">=" ;
expr      = primary { ("+" | "-") primary } ;
primary   = NUMBER | STRING | "true" | "false"
          | "curr" | "last" | IDENT
          | "e" "[" index "]" "." attr
          | "(" expr ")" ;
index     = iterm { ("+" | "-") iterm } ;
iterm     = PINT | IDENT | "curr" | "last" | "(" index ")" ;
attr      = IDENT | STRING ;                   (* IDENT may contain ':' *)
NUMBER    = digits with optional "_" separators and decimal point ;
PINT      = positive integer ;
STRING    = double-quoted, backslash escapes \" \\ \n \t \r ;
comments  = "#" to end of line ;)ebnf";
}

}  // namespace procast::foe

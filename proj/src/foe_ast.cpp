#include "procast/foe_ast.hpp"

#include "procast/attr_value.hpp"

namespace procast::foe {

const char* cmp_token(Cmp op) {
  switch (op) {
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Gt: return ">";
    case Cmp::Le: return "<=";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

// --- factories / clone -------------------------------------------------------

std::unique_ptr<IndexExpr> IndexExpr::make_var(std::string name) {
  auto p = std::make_unique<IndexExpr>();
  p->kind = Kind::Var;
  p->var = std::move(name);
  return p;
}

std::unique_ptr<IndexExpr> IndexExpr::make_lit(long long v) {
  auto p = std::make_unique<IndexExpr>();
  p->kind = Kind::Lit;
  p->lit = v;
  return p;
}

std::unique_ptr<IndexExpr> IndexExpr::make_curr() {
  auto p = std::make_unique<IndexExpr>();
  p->kind = Kind::Curr;
  return p;
}

std::unique_ptr<IndexExpr> IndexExpr::make_last() {
  auto p = std::make_unique<IndexExpr>();
  p->kind = Kind::Last;
  return p;
}

std::unique_ptr<IndexExpr> IndexExpr::make_binary(Kind k, std::unique_ptr<IndexExpr> l,
                                                  std::unique_ptr<IndexExpr> r) {
  auto p = std::make_unique<IndexExpr>();
  p->kind = k;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

std::unique_ptr<IndexExpr> IndexExpr::clone() const {
  auto p = std::make_unique<IndexExpr>();
  p->kind = kind;
  p->var = var;
  p->lit = lit;
  if (lhs) p->lhs = lhs->clone();
  if (rhs) p->rhs = rhs->clone();
  return p;
}

std::unique_ptr<Expr> Expr::make_num(double v) {
  auto p = std::make_unique<Expr>();
  p->kind = Kind::NumLit;
  p->num = v;
  return p;
}

std::unique_ptr<Expr> Expr::make_str(std::string s) {
  auto p = std::make_unique<Expr>();
  p->kind = Kind::StrLit;
  p->text = std::move(s);
  return p;
}

std::unique_ptr<Expr> Expr::make_bool(bool b) {
  auto p = std::make_unique<Expr>();
  p->kind = Kind::BoolLit;
  p->boolean = b;
  return p;
}

std::unique_ptr<Expr> Expr::make_index(std::unique_ptr<IndexExpr> idx) {
  auto p = std::make_unique<Expr>();
  p->kind = Kind::Index;
  p->index = std::move(idx);
  return p;
}

std::unique_ptr<Expr> Expr::make_accessor(std::unique_ptr<IndexExpr> idx, std::string attr) {
  auto p = std::make_unique<Expr>();
  p->kind = Kind::Accessor;
  p->index = std::move(idx);
  p->text = std::move(attr);
  return p;
}

std::unique_ptr<Expr> Expr::make_binary(Kind k, std::unique_ptr<Expr> l,
                                        std::unique_ptr<Expr> r) {
  auto p = std::make_unique<Expr>();
  p->kind = k;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

std::unique_ptr<Expr> Expr::clone() const {
  auto p = std::make_unique<Expr>();
  p->kind = kind;
  p->num = num;
  p->text = text;
  p->boolean = boolean;
  p->accessor_kind = accessor_kind;
  if (index) p->index = index->clone();
  if (lhs) p->lhs = lhs->clone();
  if (rhs) p->rhs = rhs->clone();
  return p;
}

std::unique_ptr<Formula> Formula::make_const(bool truth) {
  auto p = std::make_unique<Formula>();
  p->kind = truth ? Kind::True : Kind::False;
  return p;
}

std::unique_ptr<Formula> Formula::make_atom(std::unique_ptr<Expr> l, Cmp op,
                                            std::unique_ptr<Expr> r) {
  auto p = std::make_unique<Formula>();
  p->kind = Kind::Atom;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  p->cmp = op;
  return p;
}

std::unique_ptr<Formula> Formula::make_not(std::unique_ptr<Formula> f) {
  auto p = std::make_unique<Formula>();
  p->kind = Kind::Not;
  p->a = std::move(f);
  return p;
}

std::unique_ptr<Formula> Formula::make_binary(Kind k, std::unique_ptr<Formula> l,
                                              std::unique_ptr<Formula> r) {
  auto p = std::make_unique<Formula>();
  p->kind = k;
  p->a = std::move(l);
  p->b = std::move(r);
  return p;
}

std::unique_ptr<Formula> Formula::make_quant(Kind k, std::string var,
                                             std::unique_ptr<Formula> body) {
  auto p = std::make_unique<Formula>();
  p->kind = k;
  p->var = std::move(var);
  p->a = std::move(body);
  return p;
}

std::unique_ptr<Formula> Formula::clone() const {
  auto p = std::make_unique<Formula>();
  p->kind = kind;
  p->cmp = cmp;
  p->var = var;
  if (lhs) p->lhs = lhs->clone();
  if (rhs) p->rhs = rhs->clone();
  if (a) p->a = a->clone();
  if (b) p->b = b->clone();
  return p;
}

// --- printer -----------------------------------------------------------------
// Minimal-parenthesis canonical form. Binding strength, loosest first:
// quantifiers and -> (1), or (2), and (3), not (4).

namespace {

bool bare_attr_ok(const std::string& name) {
  if (name.empty()) return false;
  char c0 = name[0];
  if (!((c0 >= 'a' && c0 <= 'z') || (c0 >= 'A' && c0 <= 'Z') || c0 == '_')) return false;
  for (char c : name) {
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
          c == '_' || c == ':')) {
      return false;
    }
  }
  return true;
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void print_index(const IndexExpr& idx, std::string& out, bool parenthesize_binary) {
  switch (idx.kind) {
    case IndexExpr::Kind::Var: out += idx.var; return;
    case IndexExpr::Kind::Lit: out += std::to_string(idx.lit); return;
    case IndexExpr::Kind::Curr: out += "curr"; return;
    case IndexExpr::Kind::Last: out += "last"; return;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub: {
      if (parenthesize_binary) out += '(';
      print_index(*idx.lhs, out, false);
      out += idx.kind == IndexExpr::Kind::Add ? " + " : " - ";
      print_index(*idx.rhs, out, true);  // right operand re-associates otherwise
      if (parenthesize_binary) out += ')';
      return;
    }
  }
}

void print_expr(const Expr& e, std::string& out, bool parenthesize_binary) {
  switch (e.kind) {
    case Expr::Kind::NumLit: out += format_double(e.num); return;
    case Expr::Kind::StrLit: out += quote_string(e.text); return;
    case Expr::Kind::BoolLit: out += e.boolean ? "true" : "false"; return;
    case Expr::Kind::Index: print_index(*e.index, out, parenthesize_binary); return;
    case Expr::Kind::Accessor: {
      out += "e[";
      print_index(*e.index, out, false);
      out += "].";
      out += bare_attr_ok(e.text) ? e.text : quote_string(e.text);
      return;
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
      if (parenthesize_binary) out += '(';
      print_expr(*e.lhs, out, false);
      out += e.kind == Expr::Kind::Add ? " + " : " - ";
      print_expr(*e.rhs, out, true);
      if (parenthesize_binary) out += ')';
      return;
    }
  }
}

int formula_level(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Implies:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not: return 4;
    default: return 5;
  }
}

void print_formula(const Formula& f, std::string& out, int min_level) {
  const bool parens = formula_level(f) < min_level;
  if (parens) out += '(';
  switch (f.kind) {
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Atom:
      print_expr(*f.lhs, out, false);
      out += ' ';
      out += cmp_token(f.cmp);
      out += ' ';
      print_expr(*f.rhs, out, false);
      break;
    case Formula::Kind::Not:
      out += "not ";
      print_formula(*f.a, out, 4);
      break;
    case Formula::Kind::And:
      print_formula(*f.a, out, 3);
      out += " and ";
      print_formula(*f.b, out, 4);
      break;
    case Formula::Kind::Or:
      print_formula(*f.a, out, 2);
      out += " or ";
      print_formula(*f.b, out, 3);
      break;
    case Formula::Kind::Implies:
      print_formula(*f.a, out, 2);
      out += " -> ";
      print_formula(*f.b, out, 1);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f.kind == Formula::Kind::Forall ? "forall " : "exists ";
      out += f.var;
      out += " . ";
      print_formula(*f.a, out, 1);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const IndexExpr& idx) {
  std::string out;
  print_index(idx, out, false);
  return out;
}

std::string to_string(const Expr& e) {
  std::string out;
  print_expr(e, out, false);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, out, 1);
  return out;
}

std::string to_string(const Target& t) {
  if (t.is_undefined()) return "undefined";
  return to_string(*t.expr);
}

std::string to_string(const AnalyticRule& r) {
  std::string out = "< ";
  for (const auto& pair : r.pairs) {
    out += to_string(*pair.condition);
    out += " => ";
    out += to_string(pair.target);
    out += ", ";
  }
  out += to_string(r.default_target);
  out += " >";
  return out;
}

}  // namespace procast::foe

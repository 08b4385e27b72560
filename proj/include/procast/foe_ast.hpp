#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace procast::foe {

// AST for the rule language: analytic rules over first-order event
// expressions. Conditions are closed formulas whose quantifiers range over
// event indices of the full trace; targets are plain (index-variable-free)
// value expressions.

enum class Cmp { Eq, Ne, Lt, Gt, Le, Ge };

/// Static value kind of an expression; selects regression vs classification
/// and gates +, - and the ordering comparisons.
enum class ValueKind { Numeric, NonNumeric };

const char* cmp_token(Cmp op);

// --- index expressions -----------------------------------------------------

struct IndexExpr {
  enum class Kind { Var, Lit, Curr, Last, Add, Sub };

  Kind kind;
  std::string var;     // Var
  long long lit = 0;   // Lit, strictly positive
  std::unique_ptr<IndexExpr> lhs, rhs;

  static std::unique_ptr<IndexExpr> make_var(std::string name);
  static std::unique_ptr<IndexExpr> make_lit(long long v);
  static std::unique_ptr<IndexExpr> make_curr();
  static std::unique_ptr<IndexExpr> make_last();
  static std::unique_ptr<IndexExpr> make_binary(Kind k, std::unique_ptr<IndexExpr> l,
                                                std::unique_ptr<IndexExpr> r);

  std::unique_ptr<IndexExpr> clone() const;
};

// --- value expressions -------------------------------------------------------

struct Expr {
  enum class Kind { NumLit, StrLit, BoolLit, Index, Accessor, Add, Sub };

  Kind kind;
  double num = 0;                      // NumLit
  std::string text;                    // StrLit payload / Accessor attribute name
  bool boolean = false;                // BoolLit
  std::unique_ptr<IndexExpr> index;    // Index (an index expression used as a number),
                                       // Accessor subscript
  ValueKind accessor_kind = ValueKind::NonNumeric;  // Accessor: resolved by static checks
  std::unique_ptr<Expr> lhs, rhs;      // Add, Sub

  static std::unique_ptr<Expr> make_num(double v);
  static std::unique_ptr<Expr> make_str(std::string s);
  static std::unique_ptr<Expr> make_bool(bool b);
  static std::unique_ptr<Expr> make_index(std::unique_ptr<IndexExpr> idx);
  static std::unique_ptr<Expr> make_accessor(std::unique_ptr<IndexExpr> idx, std::string attr);
  static std::unique_ptr<Expr> make_binary(Kind k, std::unique_ptr<Expr> l,
                                           std::unique_ptr<Expr> r);

  std::unique_ptr<Expr> clone() const;
};

// --- formulas ----------------------------------------------------------------

struct Formula {
  enum class Kind { True, False, Atom, Not, And, Or, Implies, Forall, Exists };

  Kind kind;
  std::unique_ptr<Expr> lhs, rhs;  // Atom
  Cmp cmp = Cmp::Eq;               // Atom
  std::string var;                 // Forall, Exists
  std::unique_ptr<Formula> a, b;   // children; Not and quantifiers use a

  static std::unique_ptr<Formula> make_const(bool truth);
  static std::unique_ptr<Formula> make_atom(std::unique_ptr<Expr> l, Cmp op,
                                            std::unique_ptr<Expr> r);
  static std::unique_ptr<Formula> make_not(std::unique_ptr<Formula> f);
  static std::unique_ptr<Formula> make_binary(Kind k, std::unique_ptr<Formula> l,
                                              std::unique_ptr<Formula> r);
  static std::unique_ptr<Formula> make_quant(Kind k, std::string var,
                                             std::unique_ptr<Formula> body);

  std::unique_ptr<Formula> clone() const;
};

// --- analytic rules ----------------------------------------------------------

/// A target expression; a null expr is the `undefined` target.
struct Target {
  std::unique_ptr<Expr> expr;

  bool is_undefined() const { return expr == nullptr; }
  Target clone() const { return Target{expr ? expr->clone() : nullptr}; }
};

struct RulePair {
  std::unique_ptr<Formula> condition;
  Target target;
};

struct AnalyticRule {
  std::vector<RulePair> pairs;
  Target default_target;

  /// Filled by the static checks.
  ValueKind kind = ValueKind::NonNumeric;
  std::map<std::string, ValueKind> attribute_kinds;
};

// --- printing ----------------------------------------------------------------
// Canonical concrete syntax; parsing the printed form yields the same AST.

std::string to_string(const IndexExpr& idx);
std::string to_string(const Expr& e);
std::string to_string(const Formula& f);
std::string to_string(const Target& t);
std::string to_string(const AnalyticRule& r);

}  // namespace procast::foe

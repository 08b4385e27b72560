#include "procast/foe_checks.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "procast/errors.hpp"

namespace procast::foe {

namespace {

void collect_index_vars(const IndexExpr& idx, std::set<std::string>& out) {
  switch (idx.kind) {
    case IndexExpr::Kind::Var: out.insert(idx.var); return;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub:
      collect_index_vars(*idx.lhs, out);
      collect_index_vars(*idx.rhs, out);
      return;
    default: return;
  }
}

void collect_expr_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Index:
    case Expr::Kind::Accessor: collect_index_vars(*e.index, out); return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      collect_expr_vars(*e.lhs, out);
      collect_expr_vars(*e.rhs, out);
      return;
    default: return;
  }
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind) {
    case Formula::Kind::True:
    case Formula::Kind::False: return;
    case Formula::Kind::Atom: {
      std::set<std::string> vars;
      collect_expr_vars(*f.lhs, vars);
      collect_expr_vars(*f.rhs, vars);
      for (const auto& v : vars) {
        if (!bound.count(v)) out.insert(v);
      }
      return;
    }
    case Formula::Kind::Not: collect_free(*f.a, bound, out); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_free(*f.a, bound, out);
      collect_free(*f.b, bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const bool was_bound = bound.count(f.var) > 0;
      bound.insert(f.var);
      collect_free(*f.a, bound, out);
      if (!was_bound) bound.erase(f.var);
      return;
    }
  }
}

void rename_index_vars(IndexExpr& idx, const std::map<std::string, std::string>& env) {
  switch (idx.kind) {
    case IndexExpr::Kind::Var: {
      auto it = env.find(idx.var);
      if (it != env.end()) idx.var = it->second;
      return;
    }
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub:
      rename_index_vars(*idx.lhs, env);
      rename_index_vars(*idx.rhs, env);
      return;
    default: return;
  }
}

void rename_expr_vars(Expr& e, const std::map<std::string, std::string>& env) {
  switch (e.kind) {
    case Expr::Kind::Index:
    case Expr::Kind::Accessor: rename_index_vars(*e.index, env); return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      rename_expr_vars(*e.lhs, env);
      rename_expr_vars(*e.rhs, env);
      return;
    default: return;
  }
}

void standardize(Formula& f, std::map<std::string, std::string>& env,
                 std::set<std::string>& used) {
  switch (f.kind) {
    case Formula::Kind::True:
    case Formula::Kind::False: return;
    case Formula::Kind::Atom:
      rename_expr_vars(*f.lhs, env);
      rename_expr_vars(*f.rhs, env);
      return;
    case Formula::Kind::Not: standardize(*f.a, env, used); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      standardize(*f.a, env, used);
      standardize(*f.b, env, used);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string fresh = f.var;
      if (used.count(fresh)) {
        int n = 2;
        while (used.count(f.var + "_" + std::to_string(n))) ++n;
        fresh = f.var + "_" + std::to_string(n);
      }
      used.insert(fresh);
      auto it = env.find(f.var);
      std::optional<std::string> saved;
      if (it != env.end()) saved = it->second;
      env[f.var] = fresh;
      standardize(*f.a, env, used);
      if (saved) {
        env[f.var] = *saved;
      } else {
        env.erase(f.var);
      }
      f.var = std::move(fresh);
      return;
    }
  }
}

// --- attribute kind inference ------------------------------------------------
// One kind variable per attribute name; equality atoms link the two sides,
// +/-/ordering pin operands to numeric, literals pin the opposite side.
// time:timestamp is always numeric. Anything still unconstrained afterwards
// defaults to non-numeric.

class KindSolver {
public:
  void constrain_formula(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::True:
      case Formula::Kind::False: return;
      case Formula::Kind::Atom: {
        const bool ordering = f.cmp == Cmp::Lt || f.cmp == Cmp::Gt || f.cmp == Cmp::Le ||
                              f.cmp == Cmp::Ge;
        if (ordering) {
          constrain_expr(*f.lhs, ValueKind::Numeric);
          constrain_expr(*f.rhs, ValueKind::Numeric);
        } else {
          Term a = term_of(*f.lhs);
          Term b = term_of(*f.rhs);
          link(a, b, "comparison '" + to_string(*f.lhs) + " " + cmp_token(f.cmp) + " " +
                         to_string(*f.rhs) + "'");
        }
        return;
      }
      case Formula::Kind::Not: constrain_formula(*f.a); return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        constrain_formula(*f.a);
        constrain_formula(*f.b);
        return;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: constrain_formula(*f.a); return;
    }
  }

  /// Returns the kind term of the expression while recording constraints.
  struct Term {
    std::optional<ValueKind> known;
    int node = -1;  // attribute node when not known
  };

  Term term_of(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::NumLit:
      case Expr::Kind::Index: return Term{ValueKind::Numeric, -1};
      case Expr::Kind::StrLit:
      case Expr::Kind::BoolLit: return Term{ValueKind::NonNumeric, -1};
      case Expr::Kind::Add:
      case Expr::Kind::Sub:
        constrain_expr(*e.lhs, ValueKind::Numeric);
        constrain_expr(*e.rhs, ValueKind::Numeric);
        return Term{ValueKind::Numeric, -1};
      case Expr::Kind::Accessor: {
        int n = node_of(e.text);
        return Term{std::nullopt, n};
      }
    }
    return Term{};
  }

  void constrain_expr(const Expr& e, ValueKind need) {
    Term t = term_of(e);
    if (t.known) {
      if (*t.known != need) {
        throw StaticCheckError("expression '" + to_string(e) + "' is " + kind_name(*t.known) +
                               " but is used in a " + kind_name(need) + " position");
      }
      return;
    }
    fix(t.node, need, "attribute '" + attr_name_[static_cast<std::size_t>(t.node)] + "'");
  }

  void link(Term a, Term b, const std::string& context) {
    if (a.known && b.known) {
      if (*a.known != *b.known) {
        throw StaticCheckError(context + " mixes a numeric and a non-numeric operand");
      }
      return;
    }
    if (a.known) {
      fix(b.node, *a.known, context);
      return;
    }
    if (b.known) {
      fix(a.node, *b.known, context);
      return;
    }
    unite(a.node, b.node, context);
  }

  ValueKind resolved(const std::string& attr) {
    int n = node_of(attr);
    const auto& k = fixed_[static_cast<std::size_t>(find(n))];
    return k.value_or(ValueKind::NonNumeric);
  }

  const std::map<std::string, int>& attributes() const { return attr_node_; }

private:
  static const char* kind_name(ValueKind k) {
    return k == ValueKind::Numeric ? "numeric" : "non-numeric";
  }

  int node_of(const std::string& attr) {
    auto it = attr_node_.find(attr);
    if (it != attr_node_.end()) return it->second;
    int id = static_cast<int>(parent_.size());
    parent_.push_back(id);
    fixed_.emplace_back();
    attr_node_.emplace(attr, id);
    attr_name_.push_back(attr);
    if (attr == "time:timestamp") fixed_.back() = ValueKind::Numeric;
    return id;
  }

  int find(int n) {
    while (parent_[static_cast<std::size_t>(n)] != n) {
      parent_[static_cast<std::size_t>(n)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(n)])];
      n = parent_[static_cast<std::size_t>(n)];
    }
    return n;
  }

  void fix(int n, ValueKind k, const std::string& context) {
    int r = find(n);
    auto& cur = fixed_[static_cast<std::size_t>(r)];
    if (cur && *cur != k) {
      throw StaticCheckError("conflicting kinds for " + context + ": used as both numeric and non-numeric within one rule");
    }
    cur = k;
  }

  void unite(int a, int b, const std::string& context) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    auto ka = fixed_[static_cast<std::size_t>(ra)];
    auto kb = fixed_[static_cast<std::size_t>(rb)];
    if (ka && kb && *ka != *kb) {
      throw StaticCheckError(context + " mixes a numeric and a non-numeric attribute");
    }
    parent_[static_cast<std::size_t>(ra)] = rb;
    if (ka && !kb) fixed_[static_cast<std::size_t>(rb)] = ka;
  }

  std::map<std::string, int> attr_node_;
  std::vector<std::string> attr_name_;
  std::vector<int> parent_;
  std::vector<std::optional<ValueKind>> fixed_;
};

void apply_kinds_expr(Expr& e, KindSolver& solver) {
  switch (e.kind) {
    case Expr::Kind::Accessor: e.accessor_kind = solver.resolved(e.text); return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      apply_kinds_expr(*e.lhs, solver);
      apply_kinds_expr(*e.rhs, solver);
      return;
    default: return;
  }
}

void apply_kinds_formula(Formula& f, KindSolver& solver) {
  switch (f.kind) {
    case Formula::Kind::Atom:
      apply_kinds_expr(*f.lhs, solver);
      apply_kinds_expr(*f.rhs, solver);
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: apply_kinds_formula(*f.a, solver); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      apply_kinds_formula(*f.a, solver);
      apply_kinds_formula(*f.b, solver);
      return;
    default: return;
  }
}

ValueKind expr_kind(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::NumLit:
    case Expr::Kind::Index:
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return ValueKind::Numeric;
    case Expr::Kind::StrLit:
    case Expr::Kind::BoolLit: return ValueKind::NonNumeric;
    case Expr::Kind::Accessor: return e.accessor_kind;
  }
  return ValueKind::NonNumeric;
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

void standardize_apart(Formula& f) {
  std::set<std::string> used = free_variables(f);
  std::map<std::string, std::string> env;
  standardize(f, env, used);
}

void check_formula_kinds(Formula& f) {
  KindSolver solver;
  solver.constrain_formula(f);
  apply_kinds_formula(f, solver);
}

ValueKind check_coherence(const AnalyticRule& rule) {
  std::optional<ValueKind> kind;
  std::vector<std::string> offending;
  auto consider = [&](const Target& t) {
    if (t.is_undefined()) return;
    ValueKind k = expr_kind(*t.expr);
    if (!kind) {
      kind = k;
    } else if (*kind != k) {
      offending.push_back(to_string(t));
    }
  };
  for (const auto& pair : rule.pairs) consider(pair.target);
  consider(rule.default_target);
  if (!offending.empty()) {
    std::string msg = "incoherent rule: targets mix numeric and non-numeric kinds (";
    for (std::size_t i = 0; i < offending.size(); ++i) {
      if (i) msg += ", ";
      msg += "'" + offending[i] + "'";
    }
    msg += ")";
    throw StaticCheckError(msg);
  }
  return kind.value_or(ValueKind::NonNumeric);
}

void check_rule(AnalyticRule& rule) {
  for (std::size_t i = 0; i < rule.pairs.size(); ++i) {
    Formula& cond = *rule.pairs[i].condition;
    standardize_apart(cond);
    auto free = free_variables(cond);
    if (!free.empty()) {
      std::string names;
      for (const auto& v : free) {
        if (!names.empty()) names += ", ";
        names += "'" + v + "'";
      }
      throw StaticCheckError("open formula: condition #" + std::to_string(i + 1) +
                             " has unbound index variable " + names);
    }
  }

  auto reject_vars = [](const Target& t, const std::string& which) {
    if (t.is_undefined()) return;
    std::set<std::string> vars;
    collect_expr_vars(*t.expr, vars);
    if (!vars.empty()) {
      throw StaticCheckError("index variable '" + *vars.begin() + "' not allowed in " + which +
                             " (targets may only use curr, last and constants)");
    }
  };
  for (std::size_t i = 0; i < rule.pairs.size(); ++i) {
    reject_vars(rule.pairs[i].target, "target #" + std::to_string(i + 1));
  }
  reject_vars(rule.default_target, "the default target");

  KindSolver solver;
  for (const auto& pair : rule.pairs) solver.constrain_formula(*pair.condition);
  auto constrain_target = [&](const Target& t) {
    if (!t.is_undefined()) solver.term_of(*t.expr);  // records inner constraints
  };
  for (const auto& pair : rule.pairs) constrain_target(pair.target);
  constrain_target(rule.default_target);

  for (auto& pair : rule.pairs) {
    apply_kinds_formula(*pair.condition, solver);
    if (!pair.target.is_undefined()) apply_kinds_expr(*pair.target.expr, solver);
  }
  if (!rule.default_target.is_undefined()) apply_kinds_expr(*rule.default_target.expr, solver);

  rule.attribute_kinds.clear();
  for (const auto& [attr, node] : solver.attributes()) {
    (void)node;
    rule.attribute_kinds.emplace(attr, solver.resolved(attr));
  }

  rule.kind = check_coherence(rule);
}

}  // namespace procast::foe

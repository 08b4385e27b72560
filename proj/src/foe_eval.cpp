#include "procast/foe_eval.hpp"

#include <algorithm>

#include "procast/errors.hpp"

namespace procast::foe {

// --- Valuation ----------------------------------------------------------------

void Valuation::bind(const std::string& name, long long value) {
  for (auto& [n, v] : bindings_) {
    if (n == name) {
      v = value;
      return;
    }
  }
  bindings_.emplace_back(name, value);
}

std::optional<long long> Valuation::lookup(std::string_view name) const {
  for (const auto& [n, v] : bindings_) {
    if (n == name) return v;
  }
  return std::nullopt;
}

Valuation::Scope::Scope(Valuation& v, const std::string& name, long long value) : v_(v) {
  for (std::size_t i = 0; i < v_.bindings_.size(); ++i) {
    if (v_.bindings_[i].first == name) {
      index_ = i;
      added_ = false;
      saved_ = v_.bindings_[i].second;
      v_.bindings_[i].second = value;
      return;
    }
  }
  index_ = v_.bindings_.size();
  added_ = true;
  v_.bindings_.emplace_back(name, value);
}

Valuation::Scope::~Scope() {
  if (added_) {
    v_.bindings_.pop_back();
  } else {
    v_.bindings_[index_].second = saved_;
  }
}

// --- TargetValue ----------------------------------------------------------------

TargetValue TargetValue::from_attr(const AttrValue& v) {
  switch (v.kind()) {
    case AttrValue::Kind::Undefined: return undefined();
    case AttrValue::Kind::Str: return of_str(v.text());
    case AttrValue::Kind::Num:
    case AttrValue::Kind::Timestamp: return of_num(v.number());
    case AttrValue::Kind::Bool: return of_bool(v.truth());
  }
  return undefined();
}

std::string TargetValue::to_string() const {
  switch (kind) {
    case Kind::Num: return format_double(num);
    case Kind::Str: return str;
    case Kind::Bool: return boolean ? "true" : "false";
    case Kind::Undefined: return "undefined";
  }
  return {};
}

std::string TargetValue::tagged() const {
  switch (kind) {
    case Kind::Num: return "num:" + format_double(num);
    case Kind::Str: return "str:" + str;
    case Kind::Bool: return boolean ? "bool:true" : "bool:false";
    case Kind::Undefined: return "undefined";
  }
  return {};
}

// --- index / expression evaluation ----------------------------------------------

long long eval_index(const IndexExpr& idx, const TracePrefix& p, const Valuation& v) {
  switch (idx.kind) {
    case IndexExpr::Kind::Var: {
      auto bound = v.lookup(idx.var);
      if (!bound) throw EvalError("unbound index variable '" + idx.var + "'");
      return *bound;
    }
    case IndexExpr::Kind::Lit: return idx.lit;
    case IndexExpr::Kind::Curr: return static_cast<long long>(p.curr());
    case IndexExpr::Kind::Last: return static_cast<long long>(p.last());
    case IndexExpr::Kind::Add: return eval_index(*idx.lhs, p, v) + eval_index(*idx.rhs, p, v);
    case IndexExpr::Kind::Sub: return eval_index(*idx.lhs, p, v) - eval_index(*idx.rhs, p, v);
  }
  throw EvalError("bad index expression");
}

AttrValue eval_expr(const Expr& e, const TracePrefix& p, const Valuation& v,
                    EvalWarnings* warn) {
  switch (e.kind) {
    case Expr::Kind::NumLit: return AttrValue::num(e.num);
    case Expr::Kind::StrLit: return AttrValue::str(e.text);
    case Expr::Kind::BoolLit: return AttrValue::boolean(e.boolean);
    case Expr::Kind::Index:
      return AttrValue::num(static_cast<double>(eval_index(*e.index, p, v)));
    case Expr::Kind::Accessor: {
      long long i = eval_index(*e.index, p, v);
      if (i < 1 || i > static_cast<long long>(p.last())) return AttrValue{};
      return p.at(static_cast<std::size_t>(i)).attr(e.text);
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
      AttrValue a = eval_expr(*e.lhs, p, v, warn);
      AttrValue b = eval_expr(*e.rhs, p, v, warn);
      if (a.is_undefined() || b.is_undefined()) return AttrValue{};
      if (!a.is_numeric() || !b.is_numeric()) {
        // dirty log: a declared-numeric attribute held a non-number
        if (warn) ++warn->non_numeric_arithmetic;
        return AttrValue{};
      }
      double r = e.kind == Expr::Kind::Add ? a.number() + b.number()
                                           : a.number() - b.number();
      return AttrValue::num(r);
    }
  }
  return AttrValue{};
}

bool eval_compare(Cmp op, const AttrValue& a, const AttrValue& b, EvalWarnings* warn) {
  const bool ordering = op == Cmp::Lt || op == Cmp::Gt || op == Cmp::Le || op == Cmp::Ge;
  if (ordering) {
    // any undefined operand makes an ordering atom false
    if (a.is_undefined() || b.is_undefined()) return false;
    if (!a.is_numeric() || !b.is_numeric()) {
      if (warn) ++warn->cross_kind_comparisons;
      return false;
    }
    switch (op) {
      case Cmp::Lt: return a.number() < b.number();
      case Cmp::Gt: return a.number() > b.number();
      case Cmp::Le: return a.number() <= b.number();
      default: return a.number() >= b.number();
    }
  }

  bool equal;
  if (a.is_undefined() || b.is_undefined()) {
    equal = a.is_undefined() && b.is_undefined();
  } else if (a.is_numeric() && b.is_numeric()) {
    equal = a.number() == b.number();
  } else if (a.kind() == AttrValue::Kind::Str && b.kind() == AttrValue::Kind::Str) {
    equal = a.text() == b.text();
  } else if (a.kind() == AttrValue::Kind::Bool && b.kind() == AttrValue::Kind::Bool) {
    equal = a.truth() == b.truth();
  } else {
    if (warn) ++warn->cross_kind_comparisons;
    equal = false;
  }
  return op == Cmp::Eq ? equal : !equal;
}

// --- formula evaluation -----------------------------------------------------------

namespace {

bool eval_with(const Formula& f, const TracePrefix& p, Valuation& v, EvalWarnings* warn) {
  switch (f.kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom:
      return eval_compare(f.cmp, eval_expr(*f.lhs, p, v, warn), eval_expr(*f.rhs, p, v, warn),
                          warn);
    case Formula::Kind::Not: return !eval_with(*f.a, p, v, warn);
    case Formula::Kind::And: return eval_with(*f.a, p, v, warn) && eval_with(*f.b, p, v, warn);
    case Formula::Kind::Or: return eval_with(*f.a, p, v, warn) || eval_with(*f.b, p, v, warn);
    case Formula::Kind::Implies:
      return !eval_with(*f.a, p, v, warn) || eval_with(*f.b, p, v, warn);
    case Formula::Kind::Exists: {
      for (std::size_t c = 1; c <= p.last(); ++c) {
        Valuation::Scope scope(v, f.var, static_cast<long long>(c));
        if (eval_with(*f.a, p, v, warn)) return true;
      }
      return false;
    }
    case Formula::Kind::Forall: {
      for (std::size_t c = 1; c <= p.last(); ++c) {
        Valuation::Scope scope(v, f.var, static_cast<long long>(c));
        if (!eval_with(*f.a, p, v, warn)) return false;
      }
      return true;
    }
  }
  return false;
}

void substitute(IndexExpr& idx, const std::string& var, long long value) {
  switch (idx.kind) {
    case IndexExpr::Kind::Var:
      if (idx.var == var) {
        idx.kind = IndexExpr::Kind::Lit;
        idx.lit = value;
        idx.var.clear();
      }
      return;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub:
      substitute(*idx.lhs, var, value);
      substitute(*idx.rhs, var, value);
      return;
    default: return;
  }
}

void substitute(Expr& e, const std::string& var, long long value) {
  switch (e.kind) {
    case Expr::Kind::Index:
    case Expr::Kind::Accessor: substitute(*e.index, var, value); return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      substitute(*e.lhs, var, value);
      substitute(*e.rhs, var, value);
      return;
    default: return;
  }
}

void substitute(Formula& f, const std::string& var, long long value) {
  switch (f.kind) {
    case Formula::Kind::Atom:
      substitute(*f.lhs, var, value);
      substitute(*f.rhs, var, value);
      return;
    case Formula::Kind::Not: substitute(*f.a, var, value); return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      substitute(*f.a, var, value);
      substitute(*f.b, var, value);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      // variables are standardized apart, so no capture is possible
      substitute(*f.a, var, value);
      return;
    default: return;
  }
}

}  // namespace

bool eval_formula(const Formula& f, const TracePrefix& p, EvalWarnings* warn) {
  Valuation v;
  return eval_with(f, p, v, warn);
}

std::unique_ptr<Formula> eliminate_quantifiers(const Formula& f, std::size_t trace_len) {
  switch (f.kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom: return f.clone();
    case Formula::Kind::Not: return Formula::make_not(eliminate_quantifiers(*f.a, trace_len));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return Formula::make_binary(f.kind, eliminate_quantifiers(*f.a, trace_len),
                                  eliminate_quantifiers(*f.b, trace_len));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      auto body = eliminate_quantifiers(*f.a, trace_len);  // innermost first
      const auto join =
          f.kind == Formula::Kind::Exists ? Formula::Kind::Or : Formula::Kind::And;
      std::unique_ptr<Formula> out;
      for (std::size_t c = 1; c <= trace_len; ++c) {
        auto instance = body->clone();
        substitute(*instance, f.var, static_cast<long long>(c));
        out = out ? Formula::make_binary(join, std::move(out), std::move(instance))
                  : std::move(instance);
      }
      // a quantifier over an empty range cannot arise: traces are non-empty
      return out;
    }
  }
  return f.clone();
}

bool eval_formula_by_elimination(const Formula& f, const TracePrefix& p, EvalWarnings* warn) {
  auto expanded = eliminate_quantifiers(f, p.last());
  Valuation v;
  return eval_with(*expanded, p, v, warn);
}

// --- rules -------------------------------------------------------------------------

namespace {

TargetValue eval_target(const Target& t, const TracePrefix& p, EvalWarnings* warn) {
  if (t.is_undefined()) return TargetValue::undefined();
  Valuation empty;
  return TargetValue::from_attr(eval_expr(*t.expr, p, empty, warn));
}

}  // namespace

TargetValue apply_rule(const AnalyticRule& rule, const TracePrefix& p, EvalWarnings* warn) {
  for (const auto& pair : rule.pairs) {
    if (eval_formula(*pair.condition, p, warn)) return eval_target(pair.target, p, warn);
  }
  return eval_target(rule.default_target, p, warn);
}

// --- well-definedness -----------------------------------------------------------------

std::pair<std::size_t, std::size_t> KRange::resolve(std::size_t trace_len) const {
  long long hi;
  if (k_max == -1) {
    hi = static_cast<long long>(trace_len) - 1;
  } else if (k_max == 0) {
    hi = static_cast<long long>(trace_len);
  } else {
    hi = std::min(k_max, static_cast<long long>(trace_len));
  }
  long long lo = std::max<long long>(k_min, 1);
  if (hi < lo) return {1, 0};  // empty
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

WellDefinednessReport check_well_defined(const AnalyticRule& rule, const EventLog& log,
                                         KRange range, EvalWarnings* warn) {
  WellDefinednessReport report;
  for (const auto& trace : log.traces) {
    auto [lo, hi] = range.resolve(trace.size());
    for (std::size_t k = lo; k <= hi; ++k) {
      ++report.prefixes_checked;
      TracePrefix p(trace, k);
      std::vector<std::size_t> satisfied;
      std::vector<TargetValue> values;
      for (std::size_t i = 0; i < rule.pairs.size(); ++i) {
        if (eval_formula(*rule.pairs[i].condition, p, warn)) {
          satisfied.push_back(i + 1);
          values.push_back(eval_target(rule.pairs[i].target, p, warn));
        }
      }
      bool conflict = false;
      for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] == values[0])) {
          conflict = true;
          break;
        }
      }
      if (conflict) {
        report.ok = false;
        report.violations.push_back(
            WellDefViolation{trace.id(), k, std::move(satisfied), std::move(values)});
      }
    }
  }
  return report;
}

}  // namespace procast::foe

#include "support/random_foe.hpp"

namespace procast::testsupport {

using foe::Cmp;
using foe::Expr;
using foe::Formula;
using foe::IndexExpr;

std::size_t RandomFoe::pick(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

std::unique_ptr<IndexExpr> RandomFoe::index(std::vector<std::string>& bound) {
  // weight variables up when available so quantifiers matter
  const std::size_t choice = pick(bound.empty() ? 4 : 7);
  switch (choice) {
    case 0: return IndexExpr::make_curr();
    case 1: return IndexExpr::make_last();
    case 2: return IndexExpr::make_lit(static_cast<long long>(1 + pick(6)));
    case 3: {
      auto base = bound.empty() ? IndexExpr::make_curr()
                                : IndexExpr::make_var(bound[pick(bound.size())]);
      auto offset = IndexExpr::make_lit(static_cast<long long>(1 + pick(2)));
      return IndexExpr::make_binary(
          pick(2) == 0 ? IndexExpr::Kind::Add : IndexExpr::Kind::Sub, std::move(base),
          std::move(offset));
    }
    default: return IndexExpr::make_var(bound[pick(bound.size())]);
  }
}

std::unique_ptr<Expr> RandomFoe::operand(std::vector<std::string>& bound) {
  switch (pick(6)) {
    case 0: return Expr::make_num(static_cast<double>(pick(4)));
    case 1: return Expr::make_str(pick(2) == 0 ? "a" : "b");
    case 2: return Expr::make_index(index(bound));
    case 3: {
      auto lhs = Expr::make_accessor(index(bound), "x");
      auto rhs = Expr::make_num(static_cast<double>(pick(3)));
      return Expr::make_binary(pick(2) == 0 ? Expr::Kind::Add : Expr::Kind::Sub,
                               std::move(lhs), std::move(rhs));
    }
    case 4: return Expr::make_accessor(index(bound), "s");
    default: return Expr::make_accessor(index(bound), "x");
  }
}

std::unique_ptr<Formula> RandomFoe::atom(std::vector<std::string>& bound) {
  static constexpr Cmp kOps[] = {Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Gt, Cmp::Le, Cmp::Ge};
  return Formula::make_atom(operand(bound), kOps[pick(6)], operand(bound));
}

std::unique_ptr<Formula> RandomFoe::formula(int depth, std::vector<std::string>& bound) {
  if (depth <= 0) return atom(bound);
  switch (pick(10)) {
    case 0:
    case 1:
    case 2: return atom(bound);
    case 3: return Formula::make_not(formula(depth - 1, bound));
    case 4:
      return Formula::make_binary(Formula::Kind::And, formula(depth - 1, bound),
                                  formula(depth - 1, bound));
    case 5:
      return Formula::make_binary(Formula::Kind::Or, formula(depth - 1, bound),
                                  formula(depth - 1, bound));
    case 6:
      return Formula::make_binary(Formula::Kind::Implies, formula(depth - 1, bound),
                                  formula(depth - 1, bound));
    case 7: return Formula::make_const(pick(2) == 0);
    default: {
      if (bound.size() >= 3) return atom(bound);
      std::string var = "v" + std::to_string(++var_counter_);
      bound.push_back(var);
      auto body = formula(depth - 1, bound);
      bound.pop_back();
      return Formula::make_quant(pick(2) == 0 ? Formula::Kind::Exists : Formula::Kind::Forall,
                                 std::move(var), std::move(body));
    }
  }
}

std::unique_ptr<Formula> RandomFoe::closed_formula(int max_depth) {
  std::vector<std::string> bound;
  return formula(max_depth, bound);
}

std::unique_ptr<Formula> RandomFoe::quantified_formula(bool exists, int max_depth) {
  std::string var = "v" + std::to_string(++var_counter_);
  std::vector<std::string> bound{var};
  auto body = formula(max_depth, bound);
  return Formula::make_quant(exists ? Formula::Kind::Exists : Formula::Kind::Forall,
                             std::move(var), std::move(body));
}

Trace RandomFoe::random_trace(std::size_t max_len) {
  const std::size_t len = 1 + pick(max_len);
  Trace trace("rt" + std::to_string(++trace_counter_));
  double ts = 1'000'000.0;
  for (std::size_t i = 0; i < len; ++i) {
    Event e;
    if (pick(5) != 0) e.set("x", AttrValue::num(static_cast<double>(pick(4))));
    if (pick(5) != 0) e.set("s", AttrValue::str(pick(2) == 0 ? "a" : "b"));
    e.set("time:timestamp", AttrValue::timestamp(ts));
    ts += static_cast<double>(1 + pick(1000));
    trace.append(std::move(e));
  }
  return trace;
}

}  // namespace procast::testsupport

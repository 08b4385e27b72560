#include <doctest.h>

#include <algorithm>
#include <functional>

#include "procast/foe_eval.hpp"
#include "procast/foe_parser.hpp"
#include "support/random_foe.hpp"
#include "support/reference_eval.hpp"

using namespace procast;
using testsupport::RandomFoe;

namespace {

Trace trace_with(const std::vector<std::pair<std::string, std::string>>& res_grp,
                 const std::vector<std::string>& names = {}) {
  Trace t("t");
  for (std::size_t i = 0; i < res_grp.size(); ++i) {
    Event e;
    e.set("org:resource", AttrValue::str(res_grp[i].first));
    e.set("org:group", AttrValue::str(res_grp[i].second));
    if (i < names.size()) e.set("concept:name", AttrValue::str(names[i]));
    t.append(std::move(e));
  }
  return t;
}

Trace timestamps(const std::vector<double>& ts) {
  Trace t("t");
  for (double v : ts) {
    Event e;
    e.set("time:timestamp", AttrValue::timestamp(v));
    t.append(std::move(e));
  }
  return t;
}

std::size_t count_atoms(const foe::Formula& f) {
  switch (f.kind) {
    case foe::Formula::Kind::Atom: return 1;
    case foe::Formula::Kind::True:
    case foe::Formula::Kind::False: return 0;
    default: {
      std::size_t n = 0;
      if (f.a) n += count_atoms(*f.a);
      if (f.b) n += count_atoms(*f.b);
      return n;
    }
  }
}

bool has_quantifier(const foe::Formula& f) {
  if (f.kind == foe::Formula::Kind::Exists || f.kind == foe::Formula::Kind::Forall) return true;
  if (f.a && has_quantifier(*f.a)) return true;
  if (f.b && has_quantifier(*f.b)) return true;
  return false;
}

const char* kCondPp =
    "exists i . (i > curr and e[i].org:resource != e[i+1].org:resource and "
    "i+1 <= last and e[i].org:group = e[i+1].org:group)";

}  // namespace

TEST_CASE("eval_index: curr, last and arithmetic") {
  Trace t = timestamps({0, 1, 2, 3, 4});
  TracePrefix p(t, 3);
  foe::Valuation v;
  CHECK(foe::eval_index(*foe::IndexExpr::make_curr(), p, v) == 3);
  CHECK(foe::eval_index(*foe::IndexExpr::make_last(), p, v) == 5);
  v.bind("i", 4);
  auto plus = foe::IndexExpr::make_binary(foe::IndexExpr::Kind::Add,
                                          foe::IndexExpr::make_var("i"),
                                          foe::IndexExpr::make_lit(1));
  CHECK(foe::eval_index(*plus, p, v) == 5);
  auto unbound = foe::IndexExpr::make_var("j");
  CHECK_THROWS_AS(foe::eval_index(*unbound, p, v), EvalError);
}

TEST_CASE("eval_expr: out-of-range accessor yields undefined") {
  Trace t = timestamps({0, 1, 2, 3, 4});
  TracePrefix p(t, 2);
  foe::Valuation v;
  auto too_far = foe::Expr::make_accessor(foe::IndexExpr::make_lit(6), "x");
  CHECK(foe::eval_expr(*too_far, p, v).is_undefined());
}

TEST_CASE("eval_expr: arithmetic with undefined gives undefined") {
  Trace t = timestamps({0});
  TracePrefix p(t, 1);
  foe::Valuation v;
  auto undefined_plus = foe::Expr::make_binary(
      foe::Expr::Kind::Add, foe::Expr::make_num(26),
      foe::Expr::make_accessor(foe::IndexExpr::make_lit(1), "missing"));
  CHECK(foe::eval_expr(*undefined_plus, p, v).is_undefined());
}

TEST_CASE("eval_expr: timestamp subtraction is millisecond arithmetic") {
  Trace t = timestamps({400, 1000});
  TracePrefix p(t, 2);
  foe::Valuation v;
  auto diff = foe::Expr::make_binary(
      foe::Expr::Kind::Sub,
      foe::Expr::make_accessor(foe::IndexExpr::make_lit(2), "time:timestamp"),
      foe::Expr::make_accessor(foe::IndexExpr::make_lit(1), "time:timestamp"));
  AttrValue out = foe::eval_expr(*diff, p, v);
  CHECK(out == AttrValue::num(600));
}

TEST_CASE("comparison semantics with undefined and cross-kind operands") {
  AttrValue undef;
  AttrValue s = AttrValue::str("a");
  AttrValue n = AttrValue::num(1);

  CHECK(foe::eval_compare(foe::Cmp::Eq, undef, undef));
  CHECK_FALSE(foe::eval_compare(foe::Cmp::Eq, s, undef));
  CHECK(foe::eval_compare(foe::Cmp::Ne, s, undef));
  CHECK_FALSE(foe::eval_compare(foe::Cmp::Ne, undef, undef));

  // ordering with undefined is false both ways
  CHECK_FALSE(foe::eval_compare(foe::Cmp::Lt, undef, n));
  CHECK_FALSE(foe::eval_compare(foe::Cmp::Ge, undef, n));

  foe::EvalWarnings warn;
  CHECK_FALSE(foe::eval_compare(foe::Cmp::Eq, s, n, &warn));
  CHECK(warn.cross_kind_comparisons == 1);

  // timestamps compare numerically against plain numbers
  CHECK(foe::eval_compare(foe::Cmp::Eq, AttrValue::timestamp(1000), AttrValue::num(1000)));
}

TEST_CASE("eliminate_quantifiers: direct expansions") {
  Trace two = timestamps({0, 1});
  auto exists = foe::parse_formula("exists i . i > 1");
  auto expanded = foe::eliminate_quantifiers(*exists, 2);
  CHECK_FALSE(has_quantifier(*expanded));
  CHECK(expanded->kind == foe::Formula::Kind::Or);
  CHECK(count_atoms(*expanded) == 2);
  CHECK(foe::to_string(*expanded) == "1 > 1 or 2 > 1");

  auto forall = foe::parse_formula("forall i . true");
  auto expanded3 = foe::eliminate_quantifiers(*forall, 3);
  CHECK(foe::to_string(*expanded3) == "true and true and true");

  // nested exists/forall over length 2: disjunction of 2 conjunctions of 2
  auto nested = foe::parse_formula("exists i . forall j . e[i].x = e[j].x");
  auto nested2 = foe::eliminate_quantifiers(*nested, 2);
  CHECK_FALSE(has_quantifier(*nested2));
  CHECK(nested2->kind == foe::Formula::Kind::Or);
  CHECK(count_atoms(*nested2) == 4);
}

TEST_CASE("eval_formula: ping-pong witness inside the suffix") {
  // resources A,A,B,A with one shared group: a change at i=2..3 (witness)
  Trace yes = trace_with({{"A", "G"}, {"A", "G"}, {"B", "G"}, {"A", "G"}});
  auto cond = foe::parse_formula(kCondPp);
  CHECK(foe::eval_formula(*cond, TracePrefix(yes, 2)));

  Trace no = trace_with({{"A", "G"}, {"A", "G"}, {"A", "G"}});
  CHECK_FALSE(foe::eval_formula(*cond, TracePrefix(no, 2)));
}

TEST_CASE("eval_formula: curr + 1 <= last flips at the final prefix") {
  Trace t = timestamps({0, 1, 2});
  auto f = foe::parse_formula("curr + 1 <= last");
  CHECK(foe::eval_formula(*f, TracePrefix(t, 2)));
  CHECK_FALSE(foe::eval_formula(*f, TracePrefix(t, 3)));
}

TEST_CASE("apply_rule: remaining time and defaults") {
  auto rule =
      foe::parse_rule("< curr < last => e[last].time:timestamp - e[curr].time:timestamp , 0 >");
  Trace t = timestamps({0, 100, 250});
  CHECK(foe::apply_rule(rule, TracePrefix(t, 2)) == foe::TargetValue::of_num(150));
  CHECK(foe::apply_rule(rule, TracePrefix(t, 3)) == foe::TargetValue::of_num(0));
}

TEST_CASE("apply_rule: next-event rule maps the full trace to undefined") {
  auto rule = foe::parse_rule("< curr + 1 <= last => e[curr+1].concept:name , undefined >");
  Trace t = trace_with({{"A", "G"}, {"B", "G"}, {"C", "G"}}, {"a", "b", "c"});
  CHECK(foe::apply_rule(rule, TracePrefix(t, 2)) == foe::TargetValue::of_str("c"));
  CHECK(foe::apply_rule(rule, TracePrefix(t, 3)).is_undefined());
}

TEST_CASE("check_well_defined: conflicting constants flagged at every prefix") {
  auto bad = foe::parse_rule("< true => \"a\" , true => \"b\" , \"c\" >");
  EventLog log;
  log.traces.push_back(timestamps({0, 1, 2, 3}));
  auto report = foe::check_well_defined(bad, log);
  CHECK_FALSE(report.ok);
  CHECK(report.prefixes_checked == 2);  // k in {2,3} for a 4-event trace
  CHECK(report.violations.size() == report.prefixes_checked);
  CHECK(report.violations[0].condition_indices == std::vector<std::size_t>{1, 2});
}

TEST_CASE("check_well_defined: overlapping conditions with one target pass") {
  // two ping-pong characterizations, both map to the same label
  auto rule = foe::parse_rule(
      std::string("< ") + kCondPp + " => \"Ping-Pong\" , " +
      "exists j . (j > curr and e[j].org:resource != e[j+1].org:resource and j+1 <= last and "
      "e[j].org:resource = e[j+2].org:resource and j+2 <= last and "
      "e[j].org:group = e[j+1].org:group and e[j].org:group = e[j+2].org:group) "
      "=> \"Ping-Pong\" , \"Not Ping-Pong\" >");
  EventLog log;
  log.traces.push_back(trace_with({{"A", "G"}, {"B", "G"}, {"A", "G"}, {"C", "G"}}));
  log.traces.push_back(trace_with({{"A", "G"}, {"A", "G"}, {"A", "G"}}));
  auto report = foe::check_well_defined(rule, log);
  CHECK(report.ok);

  auto disjoint = foe::parse_rule("< curr = 2 => \"two\" , curr = 3 => \"three\" , \"other\" >");
  CHECK(foe::check_well_defined(disjoint, log).ok);
}

TEST_CASE("krange resolution") {
  foe::KRange def;
  CHECK(def.resolve(8) == std::pair<std::size_t, std::size_t>{2, 7});
  CHECK(def.resolve(3) == std::pair<std::size_t, std::size_t>{2, 2});
  auto [lo, hi] = def.resolve(2);
  CHECK(lo > hi);  // empty
  foe::KRange full{2, 0};
  CHECK(full.resolve(5) == std::pair<std::size_t, std::size_t>{2, 5});
  foe::KRange capped{1, 3};
  CHECK(capped.resolve(10) == std::pair<std::size_t, std::size_t>{1, 3});
}

// --- properties -----------------------------------------------------------------

TEST_CASE("property: elimination agrees with direct evaluation") {
  RandomFoe gen(20250810);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto f = gen.closed_formula(4);
    Trace t = gen.random_trace(6);
    for (std::size_t k = 1; k <= t.size(); ++k) {
      TracePrefix p(t, k);
      bool direct = foe::eval_formula(*f, p);
      bool by_elim = foe::eval_formula_by_elimination(*f, p);
      bool reference = testsupport::ref_eval_formula(*f, t, k);
      CHECK(direct == by_elim);
      CHECK(direct == reference);
      ++checked;
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("property: undefined propagates out of any expression with a bad accessor") {
  RandomFoe gen(77);
  Trace t = gen.random_trace(4);
  TracePrefix p(t, 1);
  foe::Valuation v;
  for (int i = 0; i < 200; ++i) {
    // wrap a random numeric expression around an out-of-range accessor
    auto bad = foe::Expr::make_accessor(foe::IndexExpr::make_lit(99), "x");
    auto expr = foe::Expr::make_binary(
        i % 2 == 0 ? foe::Expr::Kind::Add : foe::Expr::Kind::Sub,
        i % 3 == 0 ? std::move(bad) : foe::Expr::make_num(1),
        i % 3 == 0 ? foe::Expr::make_num(1)
                   : foe::Expr::make_accessor(foe::IndexExpr::make_lit(99), "x"));
    CHECK(foe::eval_expr(*expr, p, v).is_undefined());
  }
}

TEST_CASE("property: formulas without curr are prefix-length independent") {
  RandomFoe gen(4242);
  int used = 0;
  for (int i = 0; i < 200 && used < 60; ++i) {
    auto f = gen.closed_formula(3);
    if (foe::to_string(*f).find("curr") != std::string::npos) continue;
    Trace t = gen.random_trace(5);
    bool first = foe::eval_formula(*f, TracePrefix(t, 1));
    for (std::size_t k = 2; k <= t.size(); ++k) {
      CHECK(foe::eval_formula(*f, TracePrefix(t, k)) == first);
    }
    ++used;
  }
  CHECK(used >= 30);
}

TEST_CASE("property: pair order does not matter for well-defined rules") {
  auto rule = foe::parse_rule(
      "< curr = 2 => \"low\" , curr + 1 <= last => \"mid\" , \"high\" >");
  // overlapping at k=2 unless... make it well-defined by checking and swapping
  auto swapped = foe::parse_rule(
      "< curr + 1 <= last => \"mid\" , curr = 2 => \"low\" , \"high\" >");

  RandomFoe gen(99);
  EventLog log;
  for (int i = 0; i < 30; ++i) log.traces.push_back(gen.random_trace(6));

  // only assert on logs where the rule is well-defined (k=2 prefixes of longer
  // traces satisfy both conditions with different targets, so restrict k)
  foe::KRange range{3, -1};
  if (foe::check_well_defined(rule, log, range).ok) {
    for (const auto& t : log.traces) {
      auto [lo, hi] = range.resolve(t.size());
      for (std::size_t k = lo; k <= hi; ++k) {
        TracePrefix p(t, k);
        CHECK(foe::apply_rule(rule, p) == foe::apply_rule(swapped, p));
      }
    }
  }
}

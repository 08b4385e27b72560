#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "procast/event_log.hpp"
#include "procast/foe_ast.hpp"

namespace procast::foe {

/// Binding of index variables to positive integers.
class Valuation {
public:
  void bind(const std::string& name, long long value);
  std::optional<long long> lookup(std::string_view name) const;

  /// Scoped rebinding used by the quantifier loops.
  class Scope {
  public:
    Scope(Valuation& v, const std::string& name, long long value);
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

  private:
    Valuation& v_;
    std::size_t index_;
    bool added_;
    long long saved_ = 0;
  };

private:
  std::vector<std::pair<std::string, long long>> bindings_;
};

/// Counters for the tolerated-dirty-data paths. Aggregated per worker and
/// merged, so totals are schedule-independent.
struct EvalWarnings {
  std::uint64_t cross_kind_comparisons = 0;
  std::uint64_t non_numeric_arithmetic = 0;
  std::uint64_t unseen_values = 0;
  std::uint64_t missing_timestamps = 0;

  void merge(const EvalWarnings& other) {
    cross_kind_comparisons += other.cross_kind_comparisons;
    non_numeric_arithmetic += other.non_numeric_arithmetic;
    unseen_values += other.unseen_values;
    missing_timestamps += other.missing_timestamps;
  }
  std::uint64_t total() const {
    return cross_kind_comparisons + non_numeric_arithmetic + unseen_values +
           missing_timestamps;
  }
};

/// What a rule maps a prefix to.
struct TargetValue {
  enum class Kind { Num, Str, Bool, Undefined };

  Kind kind = Kind::Undefined;
  double num = 0;
  std::string str;
  bool boolean = false;

  static TargetValue undefined() { return {}; }
  static TargetValue of_num(double v) { return {Kind::Num, v, {}, false}; }
  static TargetValue of_str(std::string s) { return {Kind::Str, 0, std::move(s), false}; }
  static TargetValue of_bool(bool b) { return {Kind::Bool, 0, {}, b}; }
  static TargetValue from_attr(const AttrValue& v);

  bool is_undefined() const { return kind == Kind::Undefined; }
  bool operator==(const TargetValue&) const = default;

  /// Display form ("Ping-Pong", "600000", "true", "undefined").
  std::string to_string() const;
  /// Kind-tagged form used in golden files ("str:Ping-Pong" vs "num:5").
  std::string tagged() const;
};

// --- the interpretation function ----------------------------------------------

/// Index semantics: curr = k, last = |trace|; plain integer arithmetic.
/// The result may fall outside 1..|trace| (accessors handle the range).
/// Throws EvalError for a variable missing from the valuation.
long long eval_index(const IndexExpr& idx, const TracePrefix& p, const Valuation& v);

/// Expression semantics, totalized by the undefined value: an accessor
/// whose index is out of 1..|trace| yields Undefined, and + / - propagate
/// Undefined. Timestamps take part in arithmetic as plain milliseconds.
AttrValue eval_expr(const Expr& e, const TracePrefix& p, const Valuation& v,
                    EvalWarnings* warn = nullptr);

/// Atom semantics. Equality with Undefined holds only for Undefined itself;
/// ordering with any Undefined operand is false; cross-kind equality is
/// false (counted as a warning).
bool eval_compare(Cmp op, const AttrValue& a, const AttrValue& b, EvalWarnings* warn = nullptr);

/// Direct recursive evaluation of a closed formula; quantifiers enumerate
/// c in 1..|trace| (the full parent trace, not the prefix) and
/// short-circuit at the first witness / counterexample.
bool eval_formula(const Formula& f, const TracePrefix& p, EvalWarnings* warn = nullptr);

/// Expands every quantifier into an explicit disjunction (exists) or
/// conjunction (forall) over 1..trace_len, innermost first. The result is
/// quantifier-free. Reference path for eval_formula; both must agree.
std::unique_ptr<Formula> eliminate_quantifiers(const Formula& f, std::size_t trace_len);

/// eval_formula through eliminate_quantifiers (the reference route).
bool eval_formula_by_elimination(const Formula& f, const TracePrefix& p,
                                 EvalWarnings* warn = nullptr);

/// First-match rule application: the evaluated target of the first
/// satisfied condition, else the evaluated default. On rules that are
/// well-defined for the log, pair order is immaterial by definition.
TargetValue apply_rule(const AnalyticRule& rule, const TracePrefix& p,
                       EvalWarnings* warn = nullptr);

// --- well-definedness over a log -----------------------------------------------

/// Prefix-length range; k_max interpretation: -1 means |trace|-1 (the
/// default range 2..|trace|-1), 0 means |trace|, otherwise an absolute cap.
struct KRange {
  long long k_min = 2;
  long long k_max = -1;

  /// Clamped, possibly empty range [first, second] for one trace.
  std::pair<std::size_t, std::size_t> resolve(std::size_t trace_len) const;
};

struct WellDefViolation {
  std::string trace_id;
  std::size_t k = 0;
  std::vector<std::size_t> condition_indices;  // 1-based, satisfied conditions
  std::vector<TargetValue> values;             // their (distinct) target values
};

struct WellDefinednessReport {
  bool ok = true;
  std::size_t prefixes_checked = 0;
  std::vector<WellDefViolation> violations;
};

/// Checks that every prefix in range maps to exactly one target value even
/// when several conditions hold. Never throws; the report carries failures.
WellDefinednessReport check_well_defined(const AnalyticRule& rule, const EventLog& log,
                                         KRange range = {}, EvalWarnings* warn = nullptr);

}  // namespace procast::foe

#pragma once

// Seeded generators for property tests: random closed formulas over a small
// attribute pool and random traces with occasionally-missing attributes.

#include <memory>
#include <random>

#include "procast/event_log.hpp"
#include "procast/foe_ast.hpp"

namespace procast::testsupport {

class RandomFoe {
public:
  explicit RandomFoe(std::uint64_t seed) : rng_(seed) {}

  /// Closed formula, depth-bounded, quantifier-rooted versions included.
  std::unique_ptr<foe::Formula> closed_formula(int max_depth = 4);

  /// exists/forall wrapped around a random body; for the elimination laws.
  std::unique_ptr<foe::Formula> quantified_formula(bool exists, int max_depth = 3);

  /// Trace of length 1..max_len over attributes "x" (numbers, sometimes
  /// missing), "s" (strings, sometimes missing) and time:timestamp.
  Trace random_trace(std::size_t max_len = 6);

  std::mt19937_64& rng() { return rng_; }

private:
  std::unique_ptr<foe::Formula> formula(int depth, std::vector<std::string>& bound);
  std::unique_ptr<foe::Formula> atom(std::vector<std::string>& bound);
  std::unique_ptr<foe::IndexExpr> index(std::vector<std::string>& bound);
  std::unique_ptr<foe::Expr> operand(std::vector<std::string>& bound);

  std::size_t pick(std::size_t n);  // uniform 0..n-1

  std::mt19937_64 rng_;
  int trace_counter_ = 0;
  int var_counter_ = 0;
};

}  // namespace procast::testsupport

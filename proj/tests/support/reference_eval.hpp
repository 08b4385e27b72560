#pragma once

// Independent brute-force interpreter for the rule language, used as the
// oracle for golden files and equivalence properties. It shares only the
// AST and log types with the library; evaluation itself (value domain,
// comparison and arithmetic semantics, quantifier enumeration) is written
// from scratch and kept deliberately naive: full enumeration, no
// short-circuiting, no quantifier elimination.

#include <cstddef>
#include <map>
#include <string>

#include "procast/event_log.hpp"
#include "procast/foe_ast.hpp"
#include "procast/foe_eval.hpp"

namespace procast::testsupport {

bool ref_eval_formula(const foe::Formula& f, const Trace& trace, std::size_t k);

foe::TargetValue ref_apply_rule(const foe::AnalyticRule& rule, const Trace& trace,
                                std::size_t k);

}  // namespace procast::testsupport

#pragma once

#include <set>
#include <string>

#include "procast/foe_ast.hpp"

namespace procast::foe {

/// Free index variables of a formula (standard FOL definition; variables
/// occur inside index expressions, including accessor subscripts).
std::set<std::string> free_variables(const Formula& f);

/// Renames bound variables so no two quantifiers bind the same name and no
/// name is both free and bound. Free occurrences keep their names.
void standardize_apart(Formula& f);

/// Infers one kind per attribute from usage in a standalone formula and
/// stores it on every accessor. Throws StaticCheckError on conflicting use.
void check_formula_kinds(Formula& f);

/// Returns the unique kind of the rule's targets (numeric rules train
/// regression models, non-numeric rules classifiers). Accessor kinds must
/// already be resolved. Throws StaticCheckError when targets mix kinds.
/// A rule whose every target is `undefined` defaults to NonNumeric.
ValueKind check_coherence(const AnalyticRule& rule);

/// Runs every rule-level static check, in order: standardize variables
/// apart, conditions closed, targets free of index variables, one kind per
/// attribute across the whole rule, coherent targets. Fills rule.kind and
/// rule.attribute_kinds and resolves every accessor's kind.
void check_rule(AnalyticRule& rule);

}  // namespace procast::foe

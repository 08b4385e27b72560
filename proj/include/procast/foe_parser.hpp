#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "procast/foe_ast.hpp"

namespace procast::foe {

// Concrete syntax. One rule per file, '#' starts a line comment:
//
//   < exists i . (i > curr and e[i].org:group != e[i+1].org:group
//                 and i + 1 <= last and e[i].concept:name != "Queued")
//       => "Ping-Pong",
//     "Not Ping-Pong" >
//
// Keywords: forall exists and or not true false undefined curr last.
// Comparisons: = (or ==) != < > <= >=. Implication inside formulas is ->;
// => separates a condition from its target. Accessors are e[IDX].ATTR with
// ATTR a bare [A-Za-z_][A-Za-z0-9_:]* name or a double-quoted string.
// Numeric literals allow underscores (10_800_000). Precedence, loosest to
// tightest: -> (right-assoc), or, and, not, comparison, additive; a
// quantifier's body extends as far right as possible.

/// Parses a formula, standardizes bound variables apart and runs the
/// attribute-kind checks. Free index variables are allowed here (closedness
/// is a rule-level check). Throws ParseError / StaticCheckError.
std::unique_ptr<Formula> parse_formula(std::string_view text);

/// Parses an analytic rule and runs every static check: variables renamed
/// apart, every condition closed, no index variables inside targets,
/// one inferred kind per attribute, coherent target kinds.
AnalyticRule parse_rule(std::string_view text);

/// Reads one rule from a UTF-8 file ('#' comments allowed).
AnalyticRule parse_rule_file(const std::string& path);

/// Grammar reference shipped with --help and docs/language.md.
const char* grammar_ebnf();

}  // namespace procast::foe

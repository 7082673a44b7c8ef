#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlcc {

/* Error raised by the LTL lexer/parser. `offset` is the byte offset into the
 * input text where the problem was detected. */
class ltl_parse_error : public std::runtime_error {
public:
  ltl_parse_error(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

enum class FormulaKind {
  True,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
};

/* Immutable LTL syntax tree. Shared subtrees are fine; nothing mutates a
 * node after construction. */
struct Formula {
  FormulaKind kind;
  std::string atom;                      // Atom only
  std::shared_ptr<const Formula> lhs;    // unary: the operand; binary: left
  std::shared_ptr<const Formula> rhs;    // binary only
};

using FormulaPtr = std::shared_ptr<const Formula>;

FormulaPtr make_true();
FormulaPtr make_atom(const std::string& name);
FormulaPtr make_unary(FormulaKind kind, FormulaPtr operand);
FormulaPtr make_binary(FormulaKind kind, FormulaPtr lhs, FormulaPtr rhs);

/* Parses the ASCII LTL grammar (see docs/ltl-grammar.ebnf):
 *   unary !, X, F, G bind tightest; then U (right-associative);
 *   then &, then |, then -> (right-associative).
 * `#` starts a line comment. Throws ltl_parse_error. */
FormulaPtr parse_ltl(const std::string& text);

/* Prints a formula in the same ASCII grammar; parse_ltl(print_ltl(f))
 * yields a structurally identical tree. */
std::string print_ltl(const FormulaPtr& f);

/* Rewrites derived operators into the core set {True, Atom, Not, And,
 * Until, Next}:
 *   F p       -> true U p
 *   G p       -> !(true U !p)
 *   p -> q    -> !p | q, then
 *   p | q     -> !(!p & !q)
 * Double negations are kept as-is. Idempotent. */
FormulaPtr expand_derived(const FormulaPtr& f);

/* Sorted, deduplicated list of atom names appearing in f. */
std::vector<std::string> atomic_props(const FormulaPtr& f);

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b);

}  // namespace ltlcc

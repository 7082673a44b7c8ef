#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlcc {

/* A symbol of the alphabet 2^AP, as a bitmask over the automaton's ap_list
 * (bit i set <=> proposition ap_list[i] holds). AP counts here are small
 * (<= 16), so exhaustive enumeration of 2^AP is routine. */
using Symbol = std::uint32_t;

/* Bitmask over acceptance sets: bit i set <=> the edge belongs to F_{i+1}. */
using AccMask = std::uint32_t;

/* Propositional guard over the AP list, HOA style. */
struct Guard;
using GuardPtr = std::shared_ptr<const Guard>;

struct Guard {
  enum class Kind { True, False, Ap, Not, And, Or } kind;
  int ap = -1;       // Ap only: index into ap_list
  GuardPtr lhs, rhs;

  static GuardPtr mk_true();
  static GuardPtr mk_false();
  static GuardPtr mk_ap(int ap);
  static GuardPtr mk_not(GuardPtr g);
  static GuardPtr mk_and(GuardPtr a, GuardPtr b);
  static GuardPtr mk_or(GuardPtr a, GuardPtr b);
};

bool guard_eval(const GuardPtr& g, Symbol sigma);
std::string guard_to_string(const GuardPtr& g, const std::vector<std::string>& ap_list);

struct Edge {
  int src = 0;
  GuardPtr guard;
  int dst = 0;
  AccMask acc = 0;
};

/* Transition-based generalized Buchi automaton. Acceptance sets F_1..F_m are
 * stored as per-edge membership masks; num_acc_sets is m (>= 1). */
struct Tgba {
  std::vector<std::string> ap_list;
  int num_states = 0;
  int initial = 0;
  int num_acc_sets = 1;
  std::vector<Edge> edges;

  Symbol full_symbol_mask() const { return (Symbol{1} << ap_list.size()) - 1; }
  std::vector<int> edges_from(int state) const;
};

/* Limit-deterministic partition: each state is either in the nondeterministic
 * part QN or the deterministic part QD; eps_edges are the QN -> QD jumps taken
 * without consuming a symbol. */
struct Ldba {
  Tgba aut;
  std::vector<bool> in_qd;                     // per state; false = QN
  std::vector<std::pair<int, int>> eps_edges;  // (src in QN, dst in QD)
};

class automaton_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/* Checks the four limit-determinism conditions and returns the assembled
 * Ldba. Throws automaton_error naming the violated condition and the
 * offending state or edge:
 *   1. q in QD: exactly one successor per symbol, inside QD
 *   2. q in QN: exactly one successor per symbol inside QN
 *   3. accepting edges have src and dst in QD
 *   4. QN -> QD only via eps-edges */
Ldba validate_ldba(const Tgba& aut, const std::vector<bool>& in_qd,
                   const std::vector<std::pair<int, int>>& eps_edges);

/* Finite witness for an infinite word: prefix then cycle repeated forever. */
struct LassoWord {
  std::vector<Symbol> prefix;
  std::vector<Symbol> cycle;  // nonempty
};

/* Buchi acceptance of the lasso word, resolving eps-edges by exhaustive
 * search: true iff some run reaches a cycle whose edges intersect every
 * acceptance set. */
bool accepts_lasso(const Ldba& a, const LassoWord& w);

/* Symbols with at least one outgoing transition from q (OutProps). */
std::vector<Symbol> out_props(const Tgba& a, int q);

/* Indices of edges leaving q (OutEdges). */
std::vector<int> out_edges(const Tgba& a, int q);

}  // namespace ltlcc

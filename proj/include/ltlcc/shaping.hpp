#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ltlcc/automata.hpp"

namespace ltlcc {

/* Per-episode tracker of which acceptance sets still need a visit in the
 * current round. Never all-zero: the reset rule fires inside update_visits. */
struct VisitVector {
  std::vector<bool> slots;  // size m, all true after construction/reset

  explicit VisitVector(int m = 1) : slots(m, true) {}
  bool operator[](int i) const { return slots[i]; }
};

/* LDBA plus the Boolean edge maps b_1..b_m produced by the backward
 * annotation pass, the trap states, and the per-set reachability flags. */
struct AnnotatedLdba {
  Ldba ldba;
  // b_maps[i][e] == true iff edge e is accepting in F_{i+1} or lies on the
  // marked sub-DAG leading to F_{i+1}.
  std::vector<std::vector<bool>> b_maps;
  // reach[i][q]: the g-function value after pass i (q has a marked route to
  // an F_{i+1} edge).
  std::vector<std::vector<bool>> can_reach;
  // States with g == 0 after every pass.
  std::vector<bool> trap;

  const Tgba& aut() const { return ldba.aut; }
  int num_sets() const { return ldba.aut.num_acc_sets; }
  bool is_trap(int q) const { return trap[q]; }
};

/* Backward annotation: for each acceptance set, g starts true exactly on
 * states with an outgoing accepting edge; synchronous fixpoint rounds then
 * mark edges from unmarked states into previously marked ones. Traps are the
 * states never marked for any set. */
AnnotatedLdba annotate(const Ldba& a);

/* Independent oracle for annotate: BFS levels over the reversed edge graph.
 * Restricted to small automata; test use only. */
AnnotatedLdba brute_force_annotation(const Ldba& a);

/* Applies the visit rules for taking `edge_index`: clear slot i for every
 * F_i containing the edge; if that empties V, reset to all ones and report a
 * completed acceptance round. */
bool update_visits(VisitVector& v, int edge_index, const AnnotatedLdba& a);

/* Eq.-style b-function: OR over i of (b_i(edge) AND V[i]). */
bool b_value(const AnnotatedLdba& a, const VisitVector& v, int edge_index);

struct RewardParams {
  double r_g = 50.0;   // positive, on annotated-edge firing
  double r_n = -0.1;   // small negative, scales distance-to-progress
  double r_d = -10.0;  // trap penalty
  double d_max = 15.0; // upper bound on any distance the env can report
};

/* Checks r_d < r_n < 0 < r_g (always) and the magnitude separation
 * |r_n| <= |r_d|/10 <= |r_g|/100 (unless enforce_ratio is false). Throws
 * std::invalid_argument. */
void validate_reward_params(const RewardParams& p, bool enforce_ratio = true);

/* AP indices whose singleton label symbol satisfies some outgoing edge of q
 * annotated under the current V. Pure-negative guards (satisfied by the
 * empty label) contribute nothing here; callers fall back to r_n * d_max
 * when the set comes back empty. */
std::vector<int> progress_set(const AnnotatedLdba& a, const VisitVector& v, int q);

/* Distance from the current MDP state to the union of the regions labeled by
 * the given AP indices. Supplied by the environment (planar rectangles) or
 * the gridworld (Manhattan). Never called with an empty list. */
using DistanceFn = std::function<double(const std::vector<int>& progress_aps)>;

/* Shaped product-MDP reward for taking the unique edge (q, sigma, q').
 * If q has an outgoing edge annotated under V:
 *     r_n * d(s, E) * (1 - b(e)) + r_g * b(e)
 * with E = progress_set (empty E falls back to d = d_max); otherwise r_d.
 * Evaluated against V *before* the visit update. */
double shaped_reward(const AnnotatedLdba& a, const VisitVector& v, int q, Symbol sigma,
                     const RewardParams& params, const DistanceFn& distance);

/* Unique successor edge of q on symbol sigma. Throws automaton_error if the
 * automaton is not total-deterministic at q (corrupt input). */
int edge_on_symbol(const Tgba& aut, int q, Symbol sigma);

/* Audit dump: JSON text {schema_version, states, edges, b_maps, traps}. */
std::string annotation_to_json(const AnnotatedLdba& a);

}  // namespace ltlcc

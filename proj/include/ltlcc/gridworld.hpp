#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ltlcc/shaping.hpp"

namespace ltlcc {

class gridworld_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/* Finite W x H cell world with deterministic 4-connected moves. Moves into a
 * wall cell or off the grid leave the agent in place. Cell labels are sets of
 * region names; they are resolved against an automaton's AP list when the
 * product is built. */
struct Gridworld {
  int width = 0, height = 0;
  std::vector<bool> wall;                             // size width*height
  std::vector<std::vector<std::string>> cell_labels;  // size width*height

  int index(int x, int y) const { return y * width + x; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

void validate_gridworld(const Gridworld& gw);
Gridworld gridworld_from_json(const std::string& text);

/* Per-cell symbol over the automaton's AP list. Label names that match no AP
 * are ignored; this keeps grids reusable across formulas. */
std::vector<Symbol> grid_symbols(const Gridworld& gw, const std::vector<std::string>& ap_list);

/* 0=up(+y) 1=down 2=left 3=right. */
inline constexpr int kGridActions = 4;
int grid_move(const Gridworld& gw, int cell, int action);

struct OracleResult {
  /* Greedy action per (cell, q, V) product state; -1 on trap states. */
  std::vector<int> policy;
  /* True where the greedy policy, simulated from (cell, q, V all ones),
   * completes an acceptance round before trapping or looping. */
  std::vector<bool> satisfied;  // indexed cell * |Q| + q
  std::vector<double> values;
  int iterations = 0;
};

/* Value iteration on the finite product of the grid with an annotated
 * automaton, using the shaped reward with grid Manhattan distance in place of
 * the Euclidean region distance. The horizon is infinite: completing an
 * acceptance round resets the visit vector and continues (so the recurring
 * accepting loop dominates any one-shot shaping bonus); only trap entry is
 * absorbing. */
OracleResult tabular_oracle(const Gridworld& gw, const AnnotatedLdba& annotated,
                            const RewardParams& params, double gamma, double tol);

/* Ground truth for the satisfaction map: forward search over the same product
 * graph for a path that completes an acceptance round. */
std::vector<bool> bfs_satisfiable(const Gridworld& gw, const AnnotatedLdba& annotated);

}  // namespace ltlcc

#include "ltlcc/gridworld.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>

#include <json.hpp>

namespace ltlcc {

void validate_gridworld(const Gridworld& gw) {
  if (gw.width <= 0 || gw.height <= 0) throw gridworld_error("grid must be nonempty");
  std::size_t n = static_cast<std::size_t>(gw.width) * gw.height;
  if (gw.wall.size() != n || gw.cell_labels.size() != n) {
    throw gridworld_error("wall/label arrays do not match the grid size");
  }
}

Gridworld gridworld_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("schema_version", 0) != 1) throw gridworld_error("unknown grid schema version");
  Gridworld gw;
  gw.width = j.at("width").get<int>();
  gw.height = j.at("height").get<int>();
  if (gw.width <= 0 || gw.height <= 0) throw gridworld_error("grid must be nonempty");
  std::size_t n = static_cast<std::size_t>(gw.width) * gw.height;
  gw.wall.assign(n, false);
  gw.cell_labels.assign(n, {});
  for (const auto& cj : j.value("walls", nlohmann::json::array())) {
    int x = cj.at(0).get<int>(), y = cj.at(1).get<int>();
    if (!gw.in_bounds(x, y)) throw gridworld_error("wall cell outside the grid");
    gw.wall[gw.index(x, y)] = true;
  }
  nlohmann::json labels = j.value("labels", nlohmann::json::object());
  for (const auto& [name, cells] : labels.items()) {
    for (const auto& cj : cells) {
      int x = cj.at(0).get<int>(), y = cj.at(1).get<int>();
      if (!gw.in_bounds(x, y)) throw gridworld_error("labeled cell outside the grid");
      gw.cell_labels[gw.index(x, y)].push_back(name);
    }
  }
  validate_gridworld(gw);
  return gw;
}

std::vector<Symbol> grid_symbols(const Gridworld& gw, const std::vector<std::string>& ap_list) {
  std::vector<Symbol> out(gw.cell_labels.size(), 0);
  for (std::size_t c = 0; c < gw.cell_labels.size(); ++c) {
    for (const std::string& name : gw.cell_labels[c]) {
      for (std::size_t i = 0; i < ap_list.size(); ++i) {
        if (ap_list[i] == name) out[c] |= Symbol{1} << i;
      }
    }
  }
  return out;
}

int grid_move(const Gridworld& gw, int cell, int action) {
  int x = cell % gw.width, y = cell / gw.width;
  switch (action) {
    case 0: ++y; break;
    case 1: --y; break;
    case 2: --x; break;
    case 3: ++x; break;
    default: throw gridworld_error("bad grid action");
  }
  if (!gw.in_bounds(x, y) || gw.wall[gw.index(x, y)]) return cell;
  return gw.index(x, y);
}

namespace {

/* Manhattan distance from every cell to the nearest cell carrying each AP;
 * mirrors the Euclidean region distance of the continuous setting, so walls
 * are deliberately ignored. d_max where the AP labels no cell. */
std::vector<std::vector<double>> ap_distances(const Gridworld& gw,
                                              const std::vector<Symbol>& symbols,
                                              int num_aps, double d_max) {
  int n = gw.width * gw.height;
  std::vector<std::vector<double>> dist(num_aps, std::vector<double>(n, d_max));
  for (int ap = 0; ap < num_aps; ++ap) {
    for (int c = 0; c < n; ++c) {
      if (!(symbols[c] & (Symbol{1} << ap))) continue;
      int tx = c % gw.width, ty = c / gw.width;
      for (int d = 0; d < n; ++d) {
        int dx = d % gw.width, dy = d / gw.width;
        double m = std::abs(dx - tx) + std::abs(dy - ty);
        dist[ap][d] = std::min(dist[ap][d], m);
      }
    }
  }
  return dist;
}

int v_code(const VisitVector& v) {
  int code = 0;
  for (std::size_t i = 0; i < v.slots.size(); ++i) {
    if (v.slots[i]) code |= 1 << i;
  }
  return code;
}

VisitVector v_from_code(int code, int m) {
  VisitVector v(m);
  for (int i = 0; i < m; ++i) v.slots[i] = (code >> i) & 1;
  return v;
}

struct ProductIndex {
  int cells, states, m, n_v;

  // V codes run 1..2^m-1 (never all-zero); packed as code-1.
  int size() const { return cells * states * n_v; }
  int at(int cell, int q, int code) const { return (cell * states + q) * n_v + (code - 1); }
};

struct GridStep {
  int next_q, next_code;
  double reward;
  bool round, into_trap;
};

/* The automaton edge, reward, and visit update depend only on (cell, q, V),
 * not on the move; precompute them once per product state. */
GridStep product_step(const ProductIndex& ix, int cell, int q, int code,
                      const AnnotatedLdba& annotated, const std::vector<Symbol>& symbols,
                      const RewardParams& params,
                      const std::vector<std::vector<double>>& dist) {
  Symbol sigma = symbols[cell];
  int edge = edge_on_symbol(annotated.aut(), q, sigma);
  VisitVector v = v_from_code(code, ix.m);

  GridStep out;
  out.reward = shaped_reward(annotated, v, q, sigma, params, [&](const std::vector<int>& aps) {
    double best = params.d_max;
    for (int ap : aps) best = std::min(best, dist[ap][cell]);
    return best;
  });
  out.next_q = annotated.aut().edges[edge].dst;
  out.round = update_visits(v, edge, annotated);
  out.next_code = v_code(v);
  out.into_trap = annotated.is_trap(out.next_q);
  return out;
}

}  // namespace

OracleResult tabular_oracle(const Gridworld& gw, const AnnotatedLdba& annotated,
                            const RewardParams& params, double gamma, double tol) {
  validate_gridworld(gw);
  const Tgba& aut = annotated.aut();
  ProductIndex ix{gw.width * gw.height, aut.num_states, aut.num_acc_sets,
                  (1 << aut.num_acc_sets) - 1};
  if (static_cast<long>(ix.size()) > 100000) {
    throw gridworld_error("product too large for the tabular oracle");
  }

  std::vector<Symbol> symbols = grid_symbols(gw, aut.ap_list);
  auto dist = ap_distances(gw, symbols, static_cast<int>(aut.ap_list.size()), params.d_max);

  std::vector<GridStep> steps(ix.size());
  for (int cell = 0; cell < ix.cells; ++cell) {
    for (int q = 0; q < ix.states; ++q) {
      for (int code = 1; code <= ix.n_v; ++code) {
        steps[ix.at(cell, q, code)] = product_step(ix, cell, q, code, annotated, symbols,
                                                   params, dist);
      }
    }
  }
  std::vector<std::array<int, kGridActions>> moves(ix.cells);
  for (int cell = 0; cell < ix.cells; ++cell) {
    for (int a = 0; a < kGridActions; ++a) moves[cell][a] = grid_move(gw, cell, a);
  }

  OracleResult res;
  res.values.assign(ix.size(), 0.0);
  res.policy.assign(ix.size(), -1);
  const int kMaxIters = 100000;
  for (res.iterations = 0; res.iterations < kMaxIters; ++res.iterations) {
    double delta = 0.0;
    for (int cell = 0; cell < ix.cells; ++cell) {
      for (int q = 0; q < ix.states; ++q) {
        if (annotated.is_trap(q)) continue;  // absorbing, value 0
        for (int code = 1; code <= ix.n_v; ++code) {
          int s = ix.at(cell, q, code);
          const GridStep& st = steps[s];
          double best = -std::numeric_limits<double>::infinity();
          for (int a = 0; a < kGridActions; ++a) {
            double future = 0.0;
            if (!st.into_trap) {
              future = res.values[ix.at(moves[cell][a], st.next_q, st.next_code)];
            }
            best = std::max(best, st.reward + gamma * future);
          }
          delta = std::max(delta, std::abs(best - res.values[s]));
          res.values[s] = best;
        }
      }
    }
    if (delta < tol) break;
  }
  if (res.iterations >= kMaxIters) throw gridworld_error("value iteration did not converge");

  for (int cell = 0; cell < ix.cells; ++cell) {
    for (int q = 0; q < ix.states; ++q) {
      if (annotated.is_trap(q)) continue;
      for (int code = 1; code <= ix.n_v; ++code) {
        int s = ix.at(cell, q, code);
        const GridStep& st = steps[s];
        int best_a = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < kGridActions; ++a) {
          double future = 0.0;
          if (!st.into_trap) {
            future = res.values[ix.at(moves[cell][a], st.next_q, st.next_code)];
          }
          double qv = st.reward + gamma * future;
          if (qv > best + 1e-12) {
            best = qv;
            best_a = a;
          }
        }
        res.policy[s] = best_a;
      }
    }
  }

  // Simulate the greedy policy from every (cell, q) with a fresh V; the
  // deterministic walk either rounds, traps, or revisits a state.
  res.satisfied.assign(static_cast<std::size_t>(ix.cells) * ix.states, false);
  int horizon = ix.size() + 1;
  for (int cell0 = 0; cell0 < ix.cells; ++cell0) {
    for (int q0 = 0; q0 < ix.states; ++q0) {
      if (annotated.is_trap(q0)) continue;
      int cell = cell0, q = q0, code = ix.n_v;
      for (int t = 0; t < horizon; ++t) {
        const GridStep& st = steps[ix.at(cell, q, code)];
        if (st.round) {
          res.satisfied[static_cast<std::size_t>(cell0) * ix.states + q0] = true;
          break;
        }
        if (st.into_trap) break;
        cell = moves[cell][res.policy[ix.at(cell, q, code)]];
        q = st.next_q;
        code = st.next_code;
      }
    }
  }
  return res;
}

std::vector<bool> bfs_satisfiable(const Gridworld& gw, const AnnotatedLdba& annotated) {
  validate_gridworld(gw);
  const Tgba& aut = annotated.aut();
  ProductIndex ix{gw.width * gw.height, aut.num_states, aut.num_acc_sets,
                  (1 << aut.num_acc_sets) - 1};
  std::vector<Symbol> symbols = grid_symbols(gw, aut.ap_list);

  std::vector<bool> reach_round(ix.size(), false);
  std::vector<bool> out(static_cast<std::size_t>(ix.cells) * ix.states, false);
  for (int cell0 = 0; cell0 < ix.cells; ++cell0) {
    for (int q0 = 0; q0 < ix.states; ++q0) {
      if (annotated.is_trap(q0)) continue;
      // Forward BFS over (cell, q, V) looking for a round-completing step.
      std::vector<bool> seen(ix.size(), false);
      std::deque<int> frontier{ix.at(cell0, q0, ix.n_v)};
      seen[frontier.front()] = true;
      bool found = false;
      while (!frontier.empty() && !found) {
        int s = frontier.front();
        frontier.pop_front();
        int code = s % ix.n_v + 1;
        int q = (s / ix.n_v) % ix.states;
        int cell = s / (ix.n_v * ix.states);
        Symbol sigma = symbols[cell];
        int edge = edge_on_symbol(aut, q, sigma);
        VisitVector v = v_from_code(code, ix.m);
        bool round = update_visits(v, edge, annotated);
        if (round) {
          found = true;
          break;
        }
        int nq = aut.edges[edge].dst;
        if (annotated.is_trap(nq)) continue;
        int ncode = v_code(v);
        for (int a = 0; a < kGridActions; ++a) {
          int ns = ix.at(grid_move(gw, cell, a), nq, ncode);
          if (!seen[ns]) {
            seen[ns] = true;
            frontier.push_back(ns);
          }
        }
      }
      out[static_cast<std::size_t>(cell0) * ix.states + q0] = found;
    }
  }
  return out;
}

}  // namespace ltlcc

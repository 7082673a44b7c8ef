#include "ltlcc/automata.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace ltlcc {

GuardPtr Guard::mk_true() { return std::make_shared<Guard>(Guard{Kind::True}); }
GuardPtr Guard::mk_false() { return std::make_shared<Guard>(Guard{Kind::False}); }
GuardPtr Guard::mk_ap(int ap) {
  Guard g{Kind::Ap};
  g.ap = ap;
  return std::make_shared<Guard>(g);
}
GuardPtr Guard::mk_not(GuardPtr g) {
  Guard n{Kind::Not};
  n.lhs = std::move(g);
  return std::make_shared<Guard>(n);
}
GuardPtr Guard::mk_and(GuardPtr a, GuardPtr b) {
  Guard n{Kind::And};
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return std::make_shared<Guard>(n);
}
GuardPtr Guard::mk_or(GuardPtr a, GuardPtr b) {
  Guard n{Kind::Or};
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return std::make_shared<Guard>(n);
}

bool guard_eval(const GuardPtr& g, Symbol sigma) {
  switch (g->kind) {
    case Guard::Kind::True: return true;
    case Guard::Kind::False: return false;
    case Guard::Kind::Ap: return (sigma >> g->ap) & 1u;
    case Guard::Kind::Not: return !guard_eval(g->lhs, sigma);
    case Guard::Kind::And: return guard_eval(g->lhs, sigma) && guard_eval(g->rhs, sigma);
    case Guard::Kind::Or: return guard_eval(g->lhs, sigma) || guard_eval(g->rhs, sigma);
  }
  throw std::logic_error("unreachable guard kind");
}

namespace {
// Parenthesization follows HOA conventions: | loosest, then &, then !.
void guard_print(const GuardPtr& g, const std::vector<std::string>& aps, int parent, std::string& out) {
  switch (g->kind) {
    case Guard::Kind::True: out += "t"; return;
    case Guard::Kind::False: out += "f"; return;
    case Guard::Kind::Ap: out += std::to_string(g->ap); return;
    case Guard::Kind::Not:
      out += "!";
      guard_print(g->lhs, aps, 2, out);
      return;
    case Guard::Kind::And: {
      bool parens = parent > 1;
      if (parens) out += "(";
      guard_print(g->lhs, aps, 1, out);
      out += " & ";
      guard_print(g->rhs, aps, 1, out);
      if (parens) out += ")";
      return;
    }
    case Guard::Kind::Or: {
      bool parens = parent > 0;
      if (parens) out += "(";
      guard_print(g->lhs, aps, 0, out);
      out += " | ";
      guard_print(g->rhs, aps, 0, out);
      if (parens) out += ")";
      return;
    }
  }
}
}  // namespace

std::string guard_to_string(const GuardPtr& g, const std::vector<std::string>& ap_list) {
  std::string out;
  guard_print(g, ap_list, 0, out);
  return out;
}

std::vector<int> Tgba::edges_from(int state) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].src == state) out.push_back(static_cast<int>(i));
  }
  return out;
}

Ldba validate_ldba(const Tgba& aut, const std::vector<bool>& in_qd,
                   const std::vector<std::pair<int, int>>& eps_edges) {
  if (static_cast<int>(in_qd.size()) != aut.num_states) {
    throw automaton_error("partition does not cover all states");
  }
  for (auto [src, dst] : eps_edges) {
    if (src < 0 || src >= aut.num_states || dst < 0 || dst >= aut.num_states) {
      throw automaton_error("epsilon edge references invalid state");
    }
    if (in_qd[src]) {
      throw automaton_error("epsilon edge source not in QN: state " + std::to_string(src));
    }
    if (!in_qd[dst]) {
      throw automaton_error("epsilon edge target not in QD: state " + std::to_string(dst));
    }
  }
  // Condition 3: accepting edges live entirely in QD.
  for (std::size_t i = 0; i < aut.edges.size(); ++i) {
    const Edge& e = aut.edges[i];
    if (e.acc != 0 && (!in_qd[e.src] || !in_qd[e.dst])) {
      throw automaton_error("accepting edge outside QD: edge " + std::to_string(i));
    }
  }
  // Condition 4: symbol-labeled QN -> QD transitions are forbidden.
  for (std::size_t i = 0; i < aut.edges.size(); ++i) {
    const Edge& e = aut.edges[i];
    if (!in_qd[e.src] && in_qd[e.dst]) {
      throw automaton_error("non-epsilon transition from QN to QD: edge " + std::to_string(i));
    }
  }
  // Conditions 1 and 2: per-symbol determinism within each part.
  Symbol full = aut.full_symbol_mask();
  for (int q = 0; q < aut.num_states; ++q) {
    std::vector<int> outgoing = aut.edges_from(q);
    for (Symbol sigma = 0; sigma <= full; ++sigma) {
      int count = 0;
      for (int ei : outgoing) {
        if (guard_eval(aut.edges[ei].guard, sigma)) ++count;
      }
      const char* part = in_qd[q] ? "QD" : "QN";
      if (count > 1) {
        throw automaton_error(std::string("nondeterminism in ") + part + ": state " +
                              std::to_string(q) + " has " + std::to_string(count) +
                              " successors on symbol " + std::to_string(sigma));
      }
      if (count == 0) {
        throw automaton_error(std::string("missing successor in ") + part + ": state " +
                              std::to_string(q) + " on symbol " + std::to_string(sigma));
      }
    }
  }
  return Ldba{aut, in_qd, eps_edges};
}

namespace {

// Tarjan SCC over the lasso-product graph (automaton state x word position).
struct LassoGraph {
  int num_q;
  int num_pos;
  // adjacency: node -> list of (target node, acc mask of the automaton edge)
  std::vector<std::vector<std::pair<int, AccMask>>> adj;

  int node(int q, int pos) const { return q * num_pos + pos; }
};

}  // namespace

bool accepts_lasso(const Ldba& a, const LassoWord& w) {
  if (w.cycle.empty()) throw automaton_error("lasso cycle must be nonempty");
  const Tgba& aut = a.aut;
  const int prefix_len = static_cast<int>(w.prefix.size());
  const int total = prefix_len + static_cast<int>(w.cycle.size());

  auto symbol_at = [&](int pos) {
    return pos < prefix_len ? w.prefix[pos] : w.cycle[pos - prefix_len];
  };
  auto next_pos = [&](int pos) { return pos + 1 < total ? pos + 1 : prefix_len; };

  LassoGraph g;
  g.num_q = aut.num_states;
  g.num_pos = total;
  g.adj.resize(static_cast<std::size_t>(g.num_q) * g.num_pos);
  for (int q = 0; q < aut.num_states; ++q) {
    for (int ei : aut.edges_from(q)) {
      const Edge& e = aut.edges[ei];
      for (int pos = 0; pos < total; ++pos) {
        if (guard_eval(e.guard, symbol_at(pos))) {
          g.adj[g.node(q, pos)].push_back({g.node(e.dst, next_pos(pos)), e.acc});
        }
      }
    }
  }
  for (auto [src, dst] : a.eps_edges) {
    for (int pos = 0; pos < total; ++pos) {
      g.adj[g.node(src, pos)].push_back({g.node(dst, pos), 0});
    }
  }

  const int n = static_cast<int>(g.adj.size());
  const int start = g.node(aut.initial, 0);
  const AccMask full = (AccMask{1} << aut.num_acc_sets) - 1;

  // Iterative Tarjan restricted to nodes reachable from the start.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0, num_comps = 0;

  struct Frame {
    int node;
    std::size_t edge_i;
  };
  std::vector<Frame> frames;
  frames.push_back({start, 0});
  index[start] = low[start] = next_index++;
  stack.push_back(start);
  on_stack[start] = true;

  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.edge_i < g.adj[f.node].size()) {
      int target = g.adj[f.node][f.edge_i].first;
      ++f.edge_i;
      if (index[target] == -1) {
        index[target] = low[target] = next_index++;
        stack.push_back(target);
        on_stack[target] = true;
        frames.push_back({target, 0});
      } else if (on_stack[target]) {
        low[f.node] = std::min(low[f.node], index[target]);
      }
    } else {
      int v = f.node;
      if (low[v] == index[v]) {
        while (true) {
          int u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          comp[u] = num_comps;
          if (u == v) break;
        }
        ++num_comps;
      }
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      }
    }
  }

  // An accepting run exists iff some reachable SCC contains internal edges
  // covering every acceptance set.
  std::vector<AccMask> comp_acc(num_comps, 0);
  std::vector<bool> comp_has_edge(num_comps, false);
  for (int v = 0; v < n; ++v) {
    if (comp[v] == -1) continue;
    for (auto [target, acc] : g.adj[v]) {
      if (comp[target] == comp[v]) {
        comp_acc[comp[v]] |= acc;
        comp_has_edge[comp[v]] = true;
      }
    }
  }
  for (int c = 0; c < num_comps; ++c) {
    if (comp_has_edge[c] && comp_acc[c] == full) return true;
  }
  return false;
}

std::vector<Symbol> out_props(const Tgba& a, int q) {
  std::vector<Symbol> out;
  Symbol full = a.full_symbol_mask();
  std::vector<int> outgoing = a.edges_from(q);
  for (Symbol sigma = 0; sigma <= full; ++sigma) {
    for (int ei : outgoing) {
      if (guard_eval(a.edges[ei].guard, sigma)) {
        out.push_back(sigma);
        break;
      }
    }
  }
  return out;
}

std::vector<int> out_edges(const Tgba& a, int q) { return a.edges_from(q); }

}  // namespace ltlcc

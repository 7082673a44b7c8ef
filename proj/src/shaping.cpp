#include "ltlcc/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ltlcc {

AnnotatedLdba annotate(const Ldba& a) {
  const Tgba& aut = a.aut;
  const int m = aut.num_acc_sets;
  const int n = aut.num_states;
  const int ne = static_cast<int>(aut.edges.size());

  AnnotatedLdba out;
  out.ldba = a;
  out.b_maps.assign(m, std::vector<bool>(ne, false));
  out.can_reach.assign(m, std::vector<bool>(n, false));

  std::vector<std::vector<int>> outgoing(n);
  for (int e = 0; e < ne; ++e) outgoing[aut.edges[e].src].push_back(e);

  for (int i = 0; i < m; ++i) {
    std::vector<bool>& b = out.b_maps[i];
    std::vector<bool>& g = out.can_reach[i];
    for (int e = 0; e < ne; ++e) {
      if ((aut.edges[e].acc >> i) & 1u) {
        b[e] = true;
        g[aut.edges[e].src] = true;
      }
    }
    // Synchronous backward rounds: a round marks every edge from a yet
    // unmarked state into a state marked in an earlier round.
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<int> newly;
      for (int q = 0; q < n; ++q) {
        if (g[q]) continue;
        bool hit = false;
        for (int e : outgoing[q]) {
          if (g[aut.edges[e].dst]) {
            b[e] = true;
            hit = true;
          }
        }
        if (hit) newly.push_back(q);
      }
      for (int q : newly) g[q] = true;
      changed = !newly.empty();
    }
  }

  out.trap.assign(n, true);
  for (int q = 0; q < n; ++q) {
    for (int i = 0; i < m; ++i) {
      if (out.can_reach[i][q]) {
        out.trap[q] = false;
        break;
      }
    }
  }
  return out;
}

AnnotatedLdba brute_force_annotation(const Ldba& a) {
  const Tgba& aut = a.aut;
  if (aut.num_states > 12) {
    throw automaton_error("brute_force_annotation limited to 12 states");
  }
  const int m = aut.num_acc_sets;
  const int n = aut.num_states;
  const int ne = static_cast<int>(aut.edges.size());
  constexpr int kInf = std::numeric_limits<int>::max();

  AnnotatedLdba out;
  out.ldba = a;
  out.b_maps.assign(m, std::vector<bool>(ne, false));
  out.can_reach.assign(m, std::vector<bool>(n, false));

  for (int i = 0; i < m; ++i) {
    // Level = fewest edge steps to a state with an outgoing F_i edge,
    // computed by brute-force relaxation.
    std::vector<int> level(n, kInf);
    for (int e = 0; e < ne; ++e) {
      if ((aut.edges[e].acc >> i) & 1u) level[aut.edges[e].src] = 0;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (int e = 0; e < ne; ++e) {
        int dl = level[aut.edges[e].dst];
        if (dl != kInf && level[aut.edges[e].src] > dl + 1) {
          level[aut.edges[e].src] = dl + 1;
          changed = true;
        }
      }
    }
    for (int e = 0; e < ne; ++e) {
      if ((aut.edges[e].acc >> i) & 1u) {
        out.b_maps[i][e] = true;
      } else {
        int ls = level[aut.edges[e].src];
        int ld = level[aut.edges[e].dst];
        if (ls != kInf && ls >= 1 && ld != kInf && ld == ls - 1) {
          out.b_maps[i][e] = true;
        }
      }
    }
    for (int q = 0; q < n; ++q) out.can_reach[i][q] = level[q] != kInf;
  }

  out.trap.assign(n, true);
  for (int q = 0; q < n; ++q) {
    for (int i = 0; i < m; ++i) {
      if (out.can_reach[i][q]) {
        out.trap[q] = false;
        break;
      }
    }
  }
  return out;
}

bool update_visits(VisitVector& v, int edge_index, const AnnotatedLdba& a) {
  AccMask acc = a.aut().edges.at(edge_index).acc;
  const int m = a.num_sets();
  for (int i = 0; i < m; ++i) {
    if ((acc >> i) & 1u) v.slots[i] = false;
  }
  bool all_zero = std::none_of(v.slots.begin(), v.slots.end(), [](bool s) { return s; });
  if (all_zero) {
    v.slots.assign(m, true);
    return true;
  }
  return false;
}

bool b_value(const AnnotatedLdba& a, const VisitVector& v, int edge_index) {
  for (int i = 0; i < a.num_sets(); ++i) {
    if (a.b_maps[i][edge_index] && v[i]) return true;
  }
  return false;
}

void validate_reward_params(const RewardParams& p, bool enforce_ratio) {
  if (!(p.r_d < p.r_n && p.r_n < 0.0 && 0.0 < p.r_g)) {
    throw std::invalid_argument("reward params must satisfy r_d < r_n < 0 < r_g");
  }
  if (p.d_max <= 0.0) {
    throw std::invalid_argument("d_max must be positive");
  }
  if (enforce_ratio) {
    if (!(std::abs(p.r_n) <= std::abs(p.r_d) / 10.0 &&
          std::abs(p.r_d) / 10.0 <= p.r_g / 100.0)) {
      throw std::invalid_argument(
          "reward magnitudes must separate: |r_n| <= |r_d|/10 <= |r_g|/100");
    }
  }
}

std::vector<int> progress_set(const AnnotatedLdba& a, const VisitVector& v, int q) {
  const Tgba& aut = a.aut();
  std::vector<int> aps;
  for (int ap = 0; ap < static_cast<int>(aut.ap_list.size()); ++ap) {
    Symbol singleton = Symbol{1} << ap;
    for (int e : aut.edges_from(q)) {
      if (b_value(a, v, e) && guard_eval(aut.edges[e].guard, singleton)) {
        aps.push_back(ap);
        break;
      }
    }
  }
  return aps;
}

int edge_on_symbol(const Tgba& aut, int q, Symbol sigma) {
  int found = -1;
  for (int e : aut.edges_from(q)) {
    if (guard_eval(aut.edges[e].guard, sigma)) {
      if (found >= 0) {
        throw automaton_error("nondeterministic automaton: state " + std::to_string(q) +
                              " has multiple successors on symbol " + std::to_string(sigma));
      }
      found = e;
    }
  }
  if (found < 0) {
    throw automaton_error("automaton not total: state " + std::to_string(q) +
                          " has no successor on symbol " + std::to_string(sigma));
  }
  return found;
}

double shaped_reward(const AnnotatedLdba& a, const VisitVector& v, int q, Symbol sigma,
                     const RewardParams& params, const DistanceFn& distance) {
  const Tgba& aut = a.aut();
  bool q_live = false;
  for (int e : aut.edges_from(q)) {
    if (b_value(a, v, e)) {
      q_live = true;
      break;
    }
  }
  if (!q_live) return params.r_d;

  int e = edge_on_symbol(aut, q, sigma);
  if (b_value(a, v, e)) return params.r_g;

  std::vector<int> aps = progress_set(a, v, q);
  double d = aps.empty() ? params.d_max : distance(aps);
  return params.r_n * d;
}

std::string annotation_to_json(const AnnotatedLdba& a) {
  const Tgba& aut = a.aut();
  std::ostringstream out;
  out << "{\n  \"schema_version\": 1,\n";
  out << "  \"num_states\": " << aut.num_states << ",\n";
  out << "  \"initial\": " << aut.initial << ",\n";
  out << "  \"ap\": [";
  for (std::size_t i = 0; i < aut.ap_list.size(); ++i) {
    if (i) out << ", ";
    out << '"' << aut.ap_list[i] << '"';
  }
  out << "],\n  \"edges\": [\n";
  for (std::size_t e = 0; e < aut.edges.size(); ++e) {
    const Edge& edge = aut.edges[e];
    out << "    {\"src\": " << edge.src << ", \"guard\": \""
        << guard_to_string(edge.guard, aut.ap_list) << "\", \"dst\": " << edge.dst
        << ", \"acc\": " << edge.acc << ", \"b\": [";
    for (int i = 0; i < a.num_sets(); ++i) {
      if (i) out << ", ";
      out << (a.b_maps[i][e] ? 1 : 0);
    }
    out << "]}" << (e + 1 < aut.edges.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"b_maps\": [";
  for (int i = 0; i < a.num_sets(); ++i) {
    if (i) out << ", ";
    out << "[";
    for (std::size_t e = 0; e < aut.edges.size(); ++e) {
      if (e) out << ", ";
      out << (a.b_maps[i][e] ? 1 : 0);
    }
    out << "]";
  }
  out << "],\n  \"traps\": [";
  bool first = true;
  for (int q = 0; q < aut.num_states; ++q) {
    if (a.trap[q]) {
      if (!first) out << ", ";
      out << q;
      first = false;
    }
  }
  out << "]\n}\n";
  return out.str();
}

}  // namespace ltlcc

#include "ltlcc/translate.hpp"

#include <algorithm>
#include <map>

namespace ltlcc {

namespace {

// One step of a sequencing chain: reach `target`; for until-type steps the
// run must additionally keep `avoid` false from the (re-)arming trigger until
// `target` occurs.
struct Step {
  int target_ap;
  int avoid_ap = -1;  // until-type iff >= 0
};

struct Disjunct {
  std::vector<Step> steps;
  Symbol global_avoid = 0;  // props forbidden at every position (G !p)
};

constexpr int kTrap = -1;

// ---- matchers accepting both sugared and core-expanded forms ----

FormulaPtr strip_double_not(FormulaPtr f) {
  while (f->kind == FormulaKind::Not && f->lhs->kind == FormulaKind::Not) f = f->lhs->lhs;
  return f;
}

FormulaPtr match_eventually(const FormulaPtr& f) {
  if (f->kind == FormulaKind::Eventually) return f->lhs;
  if (f->kind == FormulaKind::Until && f->lhs->kind == FormulaKind::True) return f->rhs;
  return nullptr;
}

bool match_or(const FormulaPtr& f, FormulaPtr& l, FormulaPtr& r) {
  if (f->kind == FormulaKind::Or) {
    l = f->lhs;
    r = f->rhs;
    return true;
  }
  // !(!x & !y)
  if (f->kind == FormulaKind::Not && f->lhs->kind == FormulaKind::And &&
      f->lhs->lhs->kind == FormulaKind::Not && f->lhs->rhs->kind == FormulaKind::Not) {
    l = f->lhs->lhs->lhs;
    r = f->lhs->rhs->lhs;
    return true;
  }
  return false;
}

// G !p, also as !(true U !!p)
bool match_always_not(const FormulaPtr& f, std::string& prop) {
  if (f->kind == FormulaKind::Always) {
    FormulaPtr inner = strip_double_not(f->lhs);
    if (inner->kind == FormulaKind::Not && inner->lhs->kind == FormulaKind::Atom) {
      prop = inner->lhs->atom;
      return true;
    }
    return false;
  }
  if (f->kind == FormulaKind::Not && f->lhs->kind == FormulaKind::Until &&
      f->lhs->lhs->kind == FormulaKind::True) {
    FormulaPtr inner = strip_double_not(f->lhs->rhs);
    if (inner->kind == FormulaKind::Atom) {
      prop = inner->atom;
      return true;
    }
  }
  return false;
}

// !c U d
bool match_avoid_until(const FormulaPtr& f, std::string& avoid, std::string& target) {
  if (f->kind != FormulaKind::Until) return false;
  FormulaPtr lhs = strip_double_not(f->lhs);
  if (lhs->kind != FormulaKind::Not || lhs->lhs->kind != FormulaKind::Atom) return false;
  if (f->rhs->kind != FormulaKind::Atom) return false;
  avoid = lhs->lhs->atom;
  target = f->rhs->atom;
  return true;
}

void split_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FormulaKind::And) {
    split_and(f->lhs, out);
    split_and(f->rhs, out);
  } else {
    out.push_back(f);
  }
}

void split_or(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  FormulaPtr l, r;
  if (match_or(f, l, r)) {
    split_or(l, out);
    split_or(r, out);
  } else {
    out.push_back(f);
  }
}

class FragmentParser {
public:
  explicit FragmentParser(const std::vector<std::string>& ap_list) {
    for (std::size_t i = 0; i < ap_list.size(); ++i) {
      ap_index_[ap_list[i]] = static_cast<int>(i);
    }
  }

  std::vector<Disjunct> parse(const FormulaPtr& f) {
    // Formula-level G !p conjuncts distribute over all disjuncts.
    std::vector<FormulaPtr> conjuncts;
    split_and(f, conjuncts);
    Symbol top_avoid = 0;
    std::vector<FormulaPtr> rest;
    for (const auto& c : conjuncts) {
      std::string prop;
      if (match_always_not(c, prop)) {
        top_avoid |= bit(prop);
      } else {
        rest.push_back(c);
      }
    }
    if (rest.size() != 1) throw fragment_error(print_ltl(f));

    std::vector<FormulaPtr> raw_disjuncts;
    split_or(rest[0], raw_disjuncts);
    std::vector<Disjunct> out;
    for (const auto& d : raw_disjuncts) {
      Disjunct dis = parse_disjunct(d);
      dis.global_avoid |= top_avoid;
      out.push_back(std::move(dis));
    }
    return out;
  }

private:
  Symbol bit(const std::string& name) const { return Symbol{1} << ap_index_.at(name); }

  Disjunct parse_disjunct(const FormulaPtr& f) {
    std::vector<FormulaPtr> conjuncts;
    split_and(f, conjuncts);
    Disjunct d;
    FormulaPtr chain;
    for (const auto& c : conjuncts) {
      std::string prop;
      if (match_always_not(c, prop)) {
        d.global_avoid |= bit(prop);
      } else if (!chain) {
        chain = c;
      } else {
        throw fragment_error(print_ltl(f));
      }
    }
    if (!chain) throw fragment_error(print_ltl(f));
    parse_chain(chain, d.steps);
    return d;
  }

  void parse_chain(const FormulaPtr& f, std::vector<Step>& steps) {
    std::string avoid, target;
    if (match_avoid_until(f, avoid, target)) {
      // A bare top-level until has no re-arming trigger; a violation traps.
      // That case is encoded by an until step at position 0 (see dfa_next).
      steps.push_back({ap_index_.at(target), ap_index_.at(avoid)});
      return;
    }
    FormulaPtr body = match_eventually(f);
    if (!body) throw fragment_error(print_ltl(f));
    if (body->kind == FormulaKind::Atom) {
      steps.push_back({ap_index_.at(body->atom), -1});
      return;
    }
    if (body->kind == FormulaKind::And) {
      FormulaPtr atom = body->lhs->kind == FormulaKind::Atom ? body->lhs : body->rhs;
      FormulaPtr cont = body->lhs->kind == FormulaKind::Atom ? body->rhs : body->lhs;
      if (atom->kind != FormulaKind::Atom) throw fragment_error(print_ltl(body));
      steps.push_back({ap_index_.at(atom->atom), -1});
      parse_chain(cont, steps);
      return;
    }
    throw fragment_error(print_ltl(body));
  }

  std::map<std::string, int> ap_index_;
};

// Deterministic per-disjunct transition: position p means steps 0..p-1 are
// done. One chain step advances per symbol; regions in the environments are
// disjoint, so a symbol never carries two targets at once and this agrees
// with the nested-goal semantics on every trace the product can produce.
// A violated until drops back to the position of its re-arming trigger, or
// traps when the until is chain-initial (nothing can re-arm it).
int dfa_next(const Disjunct& d, int pos, Symbol sigma) {
  if (pos == kTrap) return kTrap;
  if (sigma & d.global_avoid) return kTrap;
  int k = static_cast<int>(d.steps.size());
  if (pos == k) return k;
  const Step& s = d.steps[pos];
  if ((sigma >> s.target_ap) & 1u) return pos + 1;
  if (s.avoid_ap >= 0 && ((sigma >> s.avoid_ap) & 1u)) {
    return pos == 0 ? kTrap : pos - 1;
  }
  return pos;
}

GuardPtr minterm_guard(const std::vector<Symbol>& symbols, int num_aps) {
  if (static_cast<std::size_t>(symbols.size()) == (std::size_t{1} << num_aps)) {
    return Guard::mk_true();
  }
  GuardPtr result;
  for (Symbol sigma : symbols) {
    GuardPtr term;
    for (int ap = 0; ap < num_aps; ++ap) {
      GuardPtr lit = ((sigma >> ap) & 1u) ? Guard::mk_ap(ap) : Guard::mk_not(Guard::mk_ap(ap));
      term = term ? Guard::mk_and(term, lit) : lit;
    }
    if (!term) term = Guard::mk_true();  // zero-AP alphabet
    result = result ? Guard::mk_or(result, term) : term;
  }
  return result;
}

}  // namespace

Ldba translate_fragment(const FormulaPtr& f) {
  std::vector<std::string> aps = atomic_props(f);
  const int num_aps = static_cast<int>(aps.size());

  Tgba aut;
  aut.ap_list = aps;
  aut.num_acc_sets = 1;

  if (f->kind == FormulaKind::True) {
    aut.num_states = 1;
    aut.initial = 0;
    aut.edges.push_back({0, Guard::mk_true(), 0, 1});
    return validate_ldba(aut, {true}, {});
  }

  FragmentParser parser(aps);
  std::vector<Disjunct> disjuncts = parser.parse(f);
  const int r = static_cast<int>(disjuncts.size());

  // Deterministic union product, explored over all symbols.
  using Tuple = std::vector<int>;
  std::map<Tuple, int> state_id;
  std::vector<Tuple> states;
  auto intern = [&](const Tuple& t) {
    auto [it, inserted] = state_id.try_emplace(t, static_cast<int>(states.size()));
    if (inserted) states.push_back(t);
    return it->second;
  };

  int init_id = intern(Tuple(r, 0));
  Symbol full = (Symbol{1} << num_aps) - 1;

  struct SymEdge {
    int dst;
    AccMask acc;
  };
  std::vector<std::vector<SymEdge>> sym_edges;  // per state, indexed by symbol

  // `states` only grows, so a plain index sweep explores the reachable set.
  for (int sid = 0; sid < static_cast<int>(states.size()); ++sid) {
    Tuple cur = states[sid];
    std::vector<SymEdge> row(full + 1);
    for (Symbol sigma = 0; sigma <= full; ++sigma) {
      Tuple nxt(r);
      AccMask acc = 0;
      for (int i = 0; i < r; ++i) {
        nxt[i] = dfa_next(disjuncts[i], cur[i], sigma);
        int done = static_cast<int>(disjuncts[i].steps.size());
        if (cur[i] == done && nxt[i] == done) acc = 1;  // done self-loop
      }
      row[sigma] = {intern(nxt), acc};
    }
    sym_edges.push_back(std::move(row));
  }

  aut.num_states = static_cast<int>(states.size());
  aut.initial = init_id;
  for (int q = 0; q < aut.num_states; ++q) {
    // Group symbols by (destination, acceptance) and build one guard each.
    std::map<std::pair<int, AccMask>, std::vector<Symbol>> groups;
    for (Symbol sigma = 0; sigma <= full; ++sigma) {
      const SymEdge& se = sym_edges[q][sigma];
      groups[{se.dst, se.acc}].push_back(sigma);
    }
    for (const auto& [key, symbols] : groups) {
      aut.edges.push_back({q, minterm_guard(symbols, num_aps), key.first, key.second});
    }
  }

  return validate_ldba(aut, std::vector<bool>(aut.num_states, true), {});
}

}  // namespace ltlcc

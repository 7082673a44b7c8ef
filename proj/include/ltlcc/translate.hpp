#pragma once

#include <stdexcept>
#include <string>

#include "ltlcc/automata.hpp"
#include "ltlcc/ltl.hpp"

namespace ltlcc {

class fragment_error : public std::runtime_error {
public:
  explicit fragment_error(const std::string& subformula)
      : std::runtime_error("formula outside supported fragment: " + subformula) {}
};

/* Builds a fully deterministic LDBA (all states in QD, no eps-edges, single
 * acceptance set with an accepting self-loop on each satisfied state) for the
 * sequencing/avoidance fragment:
 *
 *   formula  := disjunct ('|' disjunct)*  [optionally conjoined with G !p]
 *   disjunct := chain ('&' 'G !p')*
 *   chain    := F (p)
 *             | F (p & chain)
 *             | !p U q            -- reach q while avoiding p
 *             | F (p & (!c U d))  -- the until re-arms on a later p if c
 *                                    occurs before d
 *
 * Disjunctions are compiled by a deterministic product of the per-disjunct
 * automata. Both sugared (F/G/|) and core-expanded forms are recognized.
 * Throws fragment_error naming the offending subformula. */
Ldba translate_fragment(const FormulaPtr& f);

}  // namespace ltlcc

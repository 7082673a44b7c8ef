#pragma once

#include <stdexcept>
#include <string>

#include "ltlcc/automata.hpp"

namespace ltlcc {

class hoa_parse_error : public std::runtime_error {
public:
  hoa_parse_error(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  int line;
};

class hoa_unsupported_error : public std::runtime_error {
public:
  explicit hoa_unsupported_error(const std::string& feature)
      : std::runtime_error("unsupported HOA feature: " + feature) {}
};

/* Parses the HOA v1 subset used here: explicit transition guards, edge-based
 * acceptance marks, `Acceptance: m Inf(0)&...&Inf(m-1)` (generalized Buchi).
 * State-based acceptance marks, alternation, implicit labels and other
 * acceptance shapes raise hoa_unsupported_error. */
Tgba parse_hoa(const std::string& text);

/* HOA v1 text for the automaton; parse_hoa(emit_hoa(a)) reproduces a up to
 * state renaming (edge order preserved). */
std::string emit_hoa(const Tgba& a);

}  // namespace ltlcc

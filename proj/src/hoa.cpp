#include "ltlcc/hoa.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

namespace ltlcc {

namespace {

struct Line {
  std::string text;
  int number;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::string cur;
  int num = 1;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back({cur, num});
      cur.clear();
      ++num;
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back({cur, num});
  return lines;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Recursive-descent parser for HOA label expressions: t, f, AP index, !, &, |.
class GuardParser {
public:
  GuardParser(const std::string& text, int num_aps, int line)
      : text_(text), num_aps_(num_aps), line_(line) {}

  GuardPtr parse() {
    GuardPtr g = parse_or();
    skip_ws();
    if (pos_ != text_.size()) {
      throw hoa_parse_error("trailing input in guard '" + text_ + "'", line_);
    }
    return g;
  }

private:
  GuardPtr parse_or() {
    GuardPtr lhs = parse_and();
    while (peek() == '|') {
      ++pos_;
      lhs = Guard::mk_or(lhs, parse_and());
    }
    return lhs;
  }

  GuardPtr parse_and() {
    GuardPtr lhs = parse_unary();
    while (peek() == '&') {
      ++pos_;
      lhs = Guard::mk_and(lhs, parse_unary());
    }
    return lhs;
  }

  GuardPtr parse_unary() {
    skip_ws();
    char c = peek();
    if (c == '!') {
      ++pos_;
      return Guard::mk_not(parse_unary());
    }
    if (c == '(') {
      ++pos_;
      GuardPtr g = parse_or();
      skip_ws();
      if (peek() != ')') throw hoa_parse_error("unbalanced parentheses in guard", line_);
      ++pos_;
      return g;
    }
    if (c == 't') {
      ++pos_;
      return Guard::mk_true();
    }
    if (c == 'f') {
      ++pos_;
      return Guard::mk_false();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int ap = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        ap = ap * 10 + (text_[pos_++] - '0');
      }
      if (ap >= num_aps_) {
        throw hoa_parse_error("guard references AP " + std::to_string(ap) +
                                  " but only " + std::to_string(num_aps_) + " declared",
                              line_);
      }
      return Guard::mk_ap(ap);
    }
    throw hoa_parse_error("malformed guard '" + text_ + "'", line_);
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int num_aps_;
  int line_;
};

// Accepts `m Inf(0)&Inf(1)&...` with every index 0..m-1 present once.
int parse_acceptance_clause(const std::string& value, int line) {
  std::istringstream iss(value);
  int m = 0;
  if (!(iss >> m) || m < 1) {
    throw hoa_unsupported_error("acceptance condition '" + value + "' (expected generalized Buchi)");
  }
  std::string rest;
  std::getline(iss, rest);
  rest = strip(rest);
  std::set<int> seen;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    if (rest.compare(pos, 4, "Inf(") != 0) {
      throw hoa_unsupported_error("acceptance condition '" + value + "' (only Inf conjunctions supported)");
    }
    pos += 4;
    std::size_t close = rest.find(')', pos);
    if (close == std::string::npos) throw hoa_parse_error("unbalanced parenthesis in Acceptance", line);
    int idx = std::stoi(rest.substr(pos, close - pos));
    if (idx < 0 || idx >= m || !seen.insert(idx).second) {
      throw hoa_unsupported_error("acceptance condition '" + value + "' (not generalized Buchi)");
    }
    pos = close + 1;
    while (pos < rest.size() && std::isspace(static_cast<unsigned char>(rest[pos]))) ++pos;
    if (pos < rest.size()) {
      if (rest[pos] != '&') {
        throw hoa_unsupported_error("acceptance condition '" + value + "' (only Inf conjunctions supported)");
      }
      ++pos;
      while (pos < rest.size() && std::isspace(static_cast<unsigned char>(rest[pos]))) ++pos;
    }
  }
  if (static_cast<int>(seen.size()) != m) {
    throw hoa_unsupported_error("acceptance condition '" + value + "' (missing Inf sets)");
  }
  return m;
}

}  // namespace

Tgba parse_hoa(const std::string& text) {
  std::vector<Line> lines = split_lines(text);
  Tgba aut;
  aut.num_states = -1;
  aut.initial = -1;
  aut.num_acc_sets = -1;
  bool saw_version = false, saw_ap = false;

  std::size_t i = 0;
  // Header section.
  for (; i < lines.size(); ++i) {
    std::string line = strip(lines[i].text);
    int ln = lines[i].number;
    if (line.empty() || line.rfind("/*", 0) == 0) continue;
    if (line == "--BODY--") break;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw hoa_parse_error("expected 'Key: value' header, got '" + line + "'", ln);
    }
    std::string key = strip(line.substr(0, colon));
    std::string value = strip(line.substr(colon + 1));
    if (key == "HOA") {
      if (value != "v1") throw hoa_unsupported_error("HOA version " + value);
      saw_version = true;
    } else if (key == "States") {
      aut.num_states = std::stoi(value);
    } else if (key == "Start") {
      if (value.find('&') != std::string::npos) throw hoa_unsupported_error("alternation (conjunct start states)");
      if (aut.initial != -1) throw hoa_unsupported_error("multiple start states");
      aut.initial = std::stoi(value);
    } else if (key == "AP") {
      std::istringstream iss(value);
      int n = 0;
      iss >> n;
      for (int k = 0; k < n; ++k) {
        std::string name;
        iss >> std::ws;
        if (iss.get() != '"') throw hoa_parse_error("AP names must be quoted", ln);
        std::getline(iss, name, '"');
        aut.ap_list.push_back(name);
      }
      if (static_cast<int>(aut.ap_list.size()) != n) {
        throw hoa_parse_error("AP count mismatch", ln);
      }
      saw_ap = true;
    } else if (key == "Acceptance") {
      aut.num_acc_sets = parse_acceptance_clause(value, ln);
    } else if (key == "acc-name") {
      std::istringstream iss(value);
      std::string name;
      iss >> name;
      if (name != "generalized-Buchi" && name != "Buchi") {
        throw hoa_unsupported_error("acc-name " + name);
      }
    } else if (key == "name" || key == "tool" || key == "properties") {
      if (key == "properties" && value.find("state-acc") != std::string::npos) {
        throw hoa_unsupported_error("state-based acceptance");
      }
      if (key == "properties" && value.find("implicit-labels") != std::string::npos) {
        throw hoa_unsupported_error("implicit labels");
      }
    } else {
      throw hoa_unsupported_error("header '" + key + "'");
    }
  }
  if (i == lines.size()) throw hoa_parse_error("missing --BODY--", lines.empty() ? 1 : lines.back().number);
  if (!saw_version) throw hoa_parse_error("missing 'HOA: v1' header", 1);
  if (!saw_ap) throw hoa_parse_error("missing AP header", lines[i].number);
  if (aut.num_states < 0) throw hoa_parse_error("missing States header", lines[i].number);
  if (aut.initial < 0) throw hoa_parse_error("missing Start header", lines[i].number);
  if (aut.num_acc_sets < 0) throw hoa_parse_error("missing Acceptance header", lines[i].number);

  // Body section.
  ++i;
  int current_state = -1;
  std::set<int> declared;
  bool saw_end = false;
  for (; i < lines.size(); ++i) {
    std::string line = strip(lines[i].text);
    int ln = lines[i].number;
    if (line.empty() || line.rfind("/*", 0) == 0) continue;
    if (line == "--END--") {
      saw_end = true;
      break;
    }
    if (line.rfind("State:", 0) == 0) {
      std::string rest = strip(line.substr(6));
      if (rest.find('{') != std::string::npos) {
        throw hoa_unsupported_error("state-based acceptance");
      }
      if (rest.find('[') != std::string::npos) {
        throw hoa_unsupported_error("state labels");
      }
      // Optional quoted state name after the index.
      std::istringstream iss(rest);
      if (!(iss >> current_state) || current_state < 0 || current_state >= aut.num_states) {
        throw hoa_parse_error("invalid state index in '" + line + "'", ln);
      }
      if (!declared.insert(current_state).second) {
        throw hoa_parse_error("state " + std::to_string(current_state) + " declared twice", ln);
      }
      continue;
    }
    if (line[0] != '[') {
      throw hoa_unsupported_error("implicit labels (edge without [guard])");
    }
    if (current_state < 0) throw hoa_parse_error("edge before any State:", ln);
    std::size_t close = line.find(']');
    if (close == std::string::npos) throw hoa_parse_error("unterminated guard", ln);
    GuardPtr guard =
        GuardParser(line.substr(1, close - 1), static_cast<int>(aut.ap_list.size()), ln).parse();
    std::string rest = strip(line.substr(close + 1));
    std::string dst_part = rest, acc_part;
    std::size_t brace = rest.find('{');
    if (brace != std::string::npos) {
      dst_part = strip(rest.substr(0, brace));
      std::size_t rbrace = rest.find('}', brace);
      if (rbrace == std::string::npos) throw hoa_parse_error("unterminated acceptance marks", ln);
      acc_part = rest.substr(brace + 1, rbrace - brace - 1);
    }
    if (dst_part.find('&') != std::string::npos) {
      throw hoa_unsupported_error("alternation (conjunct destinations)");
    }
    int dst = -1;
    try {
      dst = std::stoi(dst_part);
    } catch (const std::exception&) {
      throw hoa_parse_error("invalid edge destination '" + dst_part + "'", ln);
    }
    if (dst < 0 || dst >= aut.num_states) {
      throw hoa_parse_error("edge destination out of range: " + dst_part, ln);
    }
    AccMask acc = 0;
    std::istringstream accs(acc_part);
    int mark;
    while (accs >> mark) {
      if (mark < 0 || mark >= aut.num_acc_sets) {
        throw hoa_parse_error("acceptance mark out of range: " + std::to_string(mark), ln);
      }
      acc |= AccMask{1} << mark;
    }
    aut.edges.push_back({current_state, guard, dst, acc});
  }
  if (!saw_end) throw hoa_parse_error("missing --END--", lines.back().number);
  return aut;
}

std::string emit_hoa(const Tgba& a) {
  std::ostringstream out;
  out << "HOA: v1\n";
  out << "States: " << a.num_states << "\n";
  out << "Start: " << a.initial << "\n";
  out << "AP: " << a.ap_list.size();
  for (const auto& ap : a.ap_list) out << " \"" << ap << "\"";
  out << "\n";
  out << "acc-name: generalized-Buchi " << a.num_acc_sets << "\n";
  out << "Acceptance: " << a.num_acc_sets << " ";
  for (int k = 0; k < a.num_acc_sets; ++k) {
    if (k) out << "&";
    out << "Inf(" << k << ")";
  }
  out << "\n";
  out << "properties: trans-labels explicit-labels trans-acc\n";
  out << "--BODY--\n";
  for (int q = 0; q < a.num_states; ++q) {
    out << "State: " << q << "\n";
    for (int ei : a.edges_from(q)) {
      const Edge& e = a.edges[ei];
      out << "[" << guard_to_string(e.guard, a.ap_list) << "] " << e.dst;
      if (e.acc != 0) {
        out << " {";
        bool first = true;
        for (int k = 0; k < a.num_acc_sets; ++k) {
          if ((e.acc >> k) & 1u) {
            if (!first) out << " ";
            out << k;
            first = false;
          }
        }
        out << "}";
      }
      out << "\n";
    }
  }
  out << "--END--\n";
  return out.str();
}

}  // namespace ltlcc

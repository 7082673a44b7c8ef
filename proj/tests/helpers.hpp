#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

inline std::string fixture_path(const std::string& name) {
  return std::string(LTLCC_FIXTURE_DIR) + "/" + name;
}

inline std::string config_path(const std::string& name) {
  return std::string(LTLCC_CONFIG_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

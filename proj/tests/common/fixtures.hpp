#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entcum/symexpr.hpp"

namespace entcum::fixtures {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_dir() { return ENTCUM_FIXTURE_DIR; }

// First line of every text fixture is "# context: mn" or "# context: malpha".
inline VarContext text_fixture_context(const std::string& text) {
  if (text.rfind("# context: mn", 0) == 0) return VarContext::MN;
  if (text.rfind("# context: malpha", 0) == 0) return VarContext::MAlpha;
  throw std::runtime_error("fixture lacks a context line");
}

inline SymExpr text_fixture(const std::string& name) {
  const std::string text = read_file(fixture_dir() + "/" + name + ".txt");
  return parse_expr(text, text_fixture_context(text));
}

/// Names of the exact cumulant fixtures, order 1..6.
inline std::vector<std::string> cumulant_fixture_names() { return {"S1", "k2", "k3", "k4", "k5", "k6"}; }

}  // namespace entcum::fixtures

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "stackres/gametext.hpp"

namespace fixtures {

inline std::string corpus_path(const std::string& name) {
  return std::string(STACKRES_CORPUS_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

inline stackres::GameDocument corpus(const std::string& name) {
  const auto stem = name.substr(0, name.rfind('.'));
  return stackres::parse_game(slurp(corpus_path(name)), stem);
}

}  // namespace fixtures

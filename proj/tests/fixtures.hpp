#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "belief_arena/io.hpp"

namespace fixtures {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline belief_arena::GameSpec load(const std::string& stem) {
  const std::string dir = BELIEF_ARENA_GAMES_DIR;
  return belief_arena::parse_game(read_file(dir + "/" + stem + ".game"), stem);
}

inline belief_arena::GameSpec coin() { return load("coin"); }
inline belief_arena::GameSpec safe() { return load("safe"); }
inline belief_arena::GameSpec pennies() { return load("pennies"); }
inline belief_arena::GameSpec pennies_trap() { return load("pennies_trap"); }

}  // namespace fixtures

inline uint32_t g_sig1(const belief_arena::GameSpec& g, const std::string& name) {
  int idx = g.signal_index(belief_arena::Player::kOne, name);
  if (idx < 0) throw std::runtime_error("unknown signal " + name);
  return static_cast<uint32_t>(idx);
}

inline uint32_t g_sig2(const belief_arena::GameSpec& g, const std::string& name) {
  int idx = g.signal_index(belief_arena::Player::kTwo, name);
  if (idx < 0) throw std::runtime_error("unknown signal " + name);
  return static_cast<uint32_t>(idx);
}

#pragma once

#include <cstdint>
#include <vector>

#include "belief_arena/almost_sure.hpp"
#include "belief_arena/game.hpp"
#include "belief_arena/rational.hpp"

namespace belief_arena {

/// Size guards for the oracle module. Guards fail loudly (throw) rather than
/// silently truncating.
struct OracleGuard {
  uint32_t max_states_outside_targets = 4;  // losing-supports lattice guard
  uint32_t max_states = 8;
  uint32_t max_actions = 4;
  uint32_t max_signals = 8;
  uint32_t max_horizon = 64;
  uint64_t max_nodes = 4'000'000;  // memoized DP node budget
};

/// Least fixpoint of supports from which uniform-random play positively
/// reaches the target: the exact complement of the safety gfp within the
/// nonempty subsets of K\T. Enumerates the full lattice (guarded).
SupportFamily losing_supports_least_fixpoint(const GameSpec& spec,
                                             const OracleGuard& guard = {});

/// Minimum over player 2's pure observation-based strategies of the
/// probability of reaching the target within `horizon` steps, with player 1
/// fixed to uniform random. Backward induction over exact conditional
/// beliefs; equals enumeration of the depth-bounded observation tree.
Rat bounded_minmax_reach(const GameSpec& spec, const Distribution& delta, uint32_t horizon,
                         const OracleGuard& guard = {});

/// True when each signal of a player determines the successor state and the
/// opponent's action (so beliefs stay singletons and the game is effectively
/// perfect-information).
bool is_revealing(const GameSpec& spec);

/// State-level fixpoints for revealing-signal games: sure safety for P2,
/// positive escape for P2, and the almost-sure reach region for P1. Refuses
/// non-revealing inputs. Classifies every singleton support.
std::vector<ThreeWayClass> perfect_info_solver(const GameSpec& spec);

}  // namespace belief_arena

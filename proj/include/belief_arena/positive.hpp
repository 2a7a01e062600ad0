#pragma once

#include <map>

#include "belief_arena/game.hpp"
#include "belief_arena/strategy.hpp"

namespace belief_arena {

enum class PositiveClass { kPosP1, kSureP2 };

/// Partition of supports into positively-winning-for-P1 and
/// surely-winning-for-P2, witnessed by the greatest fixpoint of the safety
/// operator and one certifying P2 action per surviving support.
struct PositivePartition {
  std::string game_name;
  SupportFamily sure_p2;   // the gfp, over subsets of K\T
  SupportFamily universe;  // the family the fixpoint was computed on
  std::map<Support, uint32_t> action_choice;  // member -> certifying action j
};

/// One application of the safety operator: keeps L when some P2 action j has
/// every possible successor belief (over signals encoding j) inside the
/// family. Signals whose successor belief is empty are impossible from L and
/// impose nothing. Throws if a family member intersects the target set.
SupportFamily phi_step(const GameSpec& spec, const SupportFamily& family);

/// Iterates phi_step from the target-free members of `universe` to
/// stabilization. `universe` must be closed under the P2 belief operator.
/// The certifying action per survivor is the lowest-index certifier.
PositivePartition sure_safety_fixpoint(const GameSpec& spec, const SupportFamily& universe);

/// Classification of one support: surely winning for P2 iff it avoids the
/// target set and lies in the gfp computed over its own reachable closure;
/// positively winning for P1 otherwise (uniform random play witnesses it).
PositiveClass classify_positive(const GameSpec& spec, const Support& support);

/// P2 belief strategy playing the certifying action of each gfp member.
/// Initialization is defined exactly on partition members; every reachable
/// memory state stays inside sure_p2.
FiniteMemoryStrategy synthesize_sure_p2(const GameSpec& spec,
                                        const PositivePartition& partition);

/// All nonempty subsets of K\T (for full-lattice cross-checks).
SupportFamily full_safety_lattice(const GameSpec& spec);

const char* to_string(PositiveClass c);

}  // namespace belief_arena

#pragma once

#include <map>
#include <string>
#include <vector>

#include "belief_arena/game.hpp"
#include "belief_arena/positive.hpp"
#include "belief_arena/strategy.hpp"

namespace belief_arena {

enum class ThreeWayClass { kAlmostSureP1, kSureP2, kPositiveBoth };

const char* to_string(ThreeWayClass c);

/// Synchronized product of a game with player 1's pessimistic beliefs.
/// States are (state, belief) pairs plus one absorbing target state per
/// reachable target; states whose belief component lies in the bad family are
/// absorbing. Numbering is lexicographic by (state, belief).
struct ProductGame {
  GameSpec game;
  // Per product state: original state and belief component. Target states
  // carry an empty belief component.
  std::vector<std::pair<uint32_t, Support>> state_info;
  std::vector<bool> absorbing_bad;
  std::vector<bool> is_target;
  std::map<std::pair<uint32_t, Support>, uint32_t> index_of;
};

/// Builds the product restricted to belief components reachable via the
/// target-stripped pessimistic update from the given initial supports.
/// `bad_family` members mark absorbing-bad belief components.
ProductGame build_product_game(const GameSpec& spec, const SupportFamily& bad_family,
                               const std::vector<Support>& initial_supports);

/// Self-contained sure-safety certificate automaton for one pessimistic
/// belief, frozen from the product round that removed it. Memory states are
/// P2 beliefs of the restricted product (sets of (state, belief) pairs). One
/// entry point per certified position (k,B): the strategy that commits to it
/// guesses the play currently sits exactly there.
struct CertificateAutomaton {
  struct Node {
    std::string label;
    uint32_t action;                     // certifying P2 action
    std::vector<int32_t> next;           // per P2 signal; -1 routes to sink
  };
  std::vector<Node> nodes;
  std::map<uint32_t, uint32_t> entries;  // original state k -> node index
};

/// Outcome of solving one L-game level.
struct LGameResult {
  std::string game_name;
  SupportFamily as_p1;   // examined supports almost-surely winning for P1
  SupportFamily pos_p2;  // complement among examined supports; includes L
  /// Nonempty P1 action sets per surviving pessimistic belief, restricted to
  /// the beliefs reachable from as_p1 members under allowed play.
  std::map<Support, std::vector<uint32_t>> allowed_actions;
  /// First-round product certificate partition (P2 beliefs are sets of
  /// (state, pessimistic-belief) pairs).
  PositivePartition p2_certificate;
  /// Per removed belief: frozen certificate for strategy synthesis.
  std::map<Support, CertificateAutomaton> certificates;
};

/// Classifies every examined support in the L-game defined by `family`:
/// members of `family` lose immediately for P1; otherwise the nested fixpoint
/// on pessimistic beliefs decides, with target-only supports trivially
/// almost-sure. `family` must be upward-closed within `examined`.
LGameResult solve_l_game(const GameSpec& spec, const SupportFamily& family,
                         const SupportFamily& examined);

/// The chain L_0 = {} <= L_1 <= ... up to stabilization, with per-level
/// results and the final three-way classification of examined supports.
struct LChain {
  std::string game_name;
  SupportFamily examined;
  std::vector<SupportFamily> levels;   // L_0 .. L_inf (last two equal)
  std::vector<LGameResult> results;    // results[n] solved the L_n-game
  std::map<Support, ThreeWayClass> classes;

  const SupportFamily& limit() const { return levels.back(); }
  size_t distinct_levels() const { return levels.size() - 1; }
};

/// Closure of the initial supports under both the target-stripped pessimistic
/// P1 update and the plain P2 update (the universe classifications live in).
SupportFamily examined_closure(const GameSpec& spec, const std::vector<Support>& inits);

/// All nonempty subsets of K (full-lattice mode).
SupportFamily full_support_lattice(const GameSpec& spec);

LChain almost_sure_iteration(const GameSpec& spec, const SupportFamily& examined);

/// Three-way classification of a single support (computes the positive
/// partition and the chain over the support's reachable closure).
ThreeWayClass classify_support(const GameSpec& spec, const Support& support);

/// Pessimistic-belief strategy: memory tracks the target-stripped belief,
/// outputs are uniform over the allowed action set of the final level. The
/// empty belief plays a fixed action (the play is already won).
FiniteMemoryStrategy synthesize_as_p1(const GameSpec& spec, const LChain& chain,
                                      const Support& initial);

/// Hierarchical switching strategy for P2: roaming phases per chain level,
/// each step staying, descending one level, or committing to a frozen
/// product certificate, with probability 1/3 per branch and uniform picks.
FiniteMemoryStrategy synthesize_positive_p2(const GameSpec& spec, const LChain& chain,
                                            const Support& initial);

/// Total pessimistic-belief adversary: plays uniformly over allowed actions
/// where the chain defines them and uniformly over all actions elsewhere.
/// Built-in adversary for simulations; initializes from any support.
FiniteMemoryStrategy total_pessimistic_adversary(const GameSpec& spec, const LChain& chain);

}  // namespace belief_arena

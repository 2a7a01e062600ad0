#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "belief_arena/game.hpp"

namespace belief_arena {

/// Structured label of a memory state. `text` is the authoritative
/// serialized form; the structured fields are filled where meaningful so
/// tests and tooling can inspect beliefs and phases.
struct MemoryLabel {
  enum class Kind {
    kBelief,             // P2 plain belief (sure-safety strategies)
    kPessimisticBelief,  // P1 target-stripped pessimistic belief
    kRoam,               // switching strategy, roaming phase at `level`
    kCertificate,        // switching strategy, product certificate state
    kSink,               // total fallback, plays a fixed distribution
    kPlain,              // parsed from a file or ad hoc
  };
  Kind kind = Kind::kPlain;
  Support support;  // meaningful for kBelief / kPessimisticBelief
  int level = 0;    // meaningful for kRoam / kCertificate
  std::string text;
};

using MemoryDist = std::vector<std::pair<double, uint32_t>>;  // (prob, memory)
using ActionDist = std::vector<std::pair<double, uint32_t>>;  // (prob, action)

/// Finite-memory strategy with possibly stochastic memory updates.
/// Deterministic updates are point distributions; that single representation
/// covers belief strategies, pessimistic-belief strategies and the randomized
/// switching strategies alike.
struct FiniteMemoryStrategy {
  Player player = Player::kOne;
  std::string kind = "custom";
  std::vector<MemoryLabel> memory;

  /// Explicit initialization table. Belief-structured strategies may also
  /// carry a structural rule so that any support with a known belief image
  /// initializes without an explicit entry.
  enum class InitRule { kTableOnly, kBeliefLookup, kPessimisticBeliefLookup, kAnySupport };
  InitRule init_rule = InitRule::kTableOnly;
  std::map<Support, uint32_t> init_table;
  /// Target set stripped from supports before pessimistic-belief lookup.
  Support target_mask;

  std::vector<std::vector<MemoryDist>> update;  // [memory][signal]
  std::vector<ActionDist> output;               // [memory]

  uint32_t n_memory() const { return static_cast<uint32_t>(memory.size()); }

  /// Validates table shapes and distribution sums (1e-9).
  void validate(const GameSpec& spec) const;
};

/// Returns the initial memory state for a support; refuses (throws) when the
/// support is outside the strategy's initialization domain.
uint32_t init_strategy(const FiniteMemoryStrategy& strategy, const Support& support);

/// Samples the successor memory state given a signal and a uniform draw in
/// [0,1). Deterministic strategies ignore the draw.
uint32_t step_strategy(const FiniteMemoryStrategy& strategy, uint32_t memory,
                       uint32_t signal, double unit_draw);

const ActionDist& action_distribution(const FiniteMemoryStrategy& strategy, uint32_t memory);

/// Single memory state, uniform over the player's full action set.
FiniteMemoryStrategy uniform_random_strategy(const GameSpec& spec, Player player);

/// Seeded random finite-memory strategy, used as a simulation adversary.
FiniteMemoryStrategy random_finite_memory_strategy(const GameSpec& spec, Player player,
                                                   uint32_t max_memory, uint64_t seed);

/// Samples an index from a (prob, value) list given a uniform draw.
uint32_t sample_from(const std::vector<std::pair<double, uint32_t>>& dist, double unit_draw);

bool strategies_equal(const FiniteMemoryStrategy& a, const FiniteMemoryStrategy& b,
                      double prob_tolerance = 1e-9);

}  // namespace belief_arena

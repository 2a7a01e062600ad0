#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "belief_arena/game.hpp"
#include "belief_arena/strategy.hpp"

namespace belief_arena {

enum class EpisodeOutcome { kTargetReached, kHorizonExhausted, kCertifiedSafe };

struct StepRecord {
  uint32_t i, j;  // actions played
  uint32_t c, d;  // signals received
  uint32_t k;     // successor state
};

/// One sampled play. Steps satisfy the positive-probability play condition by
/// construction (asserted while sampling); TargetReached is recorded at the
/// first visit only.
struct EpisodeTrace {
  uint32_t initial_state = 0;
  std::vector<StepRecord> steps;
  EpisodeOutcome outcome = EpisodeOutcome::kHorizonExhausted;
  uint32_t outcome_step = 0;
};

struct SimulationReport {
  uint64_t episodes = 0;
  uint64_t reach_count = 0;
  uint64_t certified_safe_count = 0;
  uint64_t horizon_exhausted_count = 0;
  double gamma1_hat = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 1.0;
  uint64_t seed = 0;
  uint32_t horizon = 0;
  uint64_t belief_violations = 0;  // populated when invariant checking is on
};

struct SimOptions {
  uint64_t episodes = 1;
  uint32_t horizon = 1;
  uint64_t seed = 0;
  /// Sure-safety family for player 2; an episode ends CertifiedSafe as soon
  /// as the target-stripped P2 belief is a member.
  const SupportFamily* certificate = nullptr;
  /// Fold all four belief operators along each episode and count violations
  /// of the runtime belief invariants.
  bool check_invariants = false;
};

/// Per-step randomness, derived deterministically from
/// (seed, episode, step, role) so results are independent of execution order.
double unit_draw(uint64_t seed, uint64_t episode, uint64_t step, uint32_t role);

EpisodeTrace run_episode(const GameSpec& spec, const FiniteMemoryStrategy& sigma,
                         const FiniteMemoryStrategy& tau, const Distribution& delta,
                         uint32_t horizon, uint64_t seed, uint64_t episode_index = 0,
                         const SupportFamily* certificate = nullptr);

SimulationReport estimate_reach(const GameSpec& spec, const FiniteMemoryStrategy& sigma,
                                const FiniteMemoryStrategy& tau, const Distribution& delta,
                                const SimOptions& options);

struct BeliefViolation {
  uint32_t step;
  std::string message;
};

/// Folds the plain and pessimistic belief operators of both players along a
/// trace and reports every step where the true state escapes a plain belief,
/// or escapes a pessimistic belief with no prior target visit.
std::vector<BeliefViolation> check_belief_invariants(const GameSpec& spec,
                                                     const EpisodeTrace& trace,
                                                     const Support& initial_support);

/// Wilson 95% interval for a binomial proportion.
std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials);

}  // namespace belief_arena

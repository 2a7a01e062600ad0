#include "belief_arena/arena.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace belief_arena {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Roles of the per-step draws.
constexpr uint32_t kRoleInit = 0;
constexpr uint32_t kRoleAction1 = 1;
constexpr uint32_t kRoleAction2 = 2;
constexpr uint32_t kRoleNature = 3;
constexpr uint32_t kRoleMemory1 = 4;
constexpr uint32_t kRoleMemory2 = 5;

uint32_t sample_state(const Distribution& delta, double u) {
  double acc = 0.0;
  uint32_t last = 0;
  for (uint32_t k = 0; k < delta.w.size(); ++k) {
    if (delta.w[k] <= 0.0) continue;
    acc += delta.w[k];
    last = k;
    if (u < acc) return k;
  }
  return last;
}

uint32_t sample_outcome(const std::vector<Outcome>& outs, double u) {
  double acc = 0.0;
  uint32_t last = 0;
  for (uint32_t idx = 0; idx < outs.size(); ++idx) {
    if (outs[idx].p <= 0.0) continue;
    acc += outs[idx].p;
    last = idx;
    if (u < acc) return idx;
  }
  return last;
}

/// Per-(signal, state) successor masks so belief folds inside the simulation
/// loop are a handful of word ORs instead of kernel walks.
struct BeliefTables {
  uint32_t n_states;
  std::vector<Support> succ1;  // [c * n_states + k]
  std::vector<Support> succ2;  // [d * n_states + k]

  explicit BeliefTables(const GameSpec& spec) : n_states(spec.n_states()) {
    succ1.assign(static_cast<size_t>(spec.n_signals(Player::kOne)) * n_states,
                 Support(n_states));
    succ2.assign(static_cast<size_t>(spec.n_signals(Player::kTwo)) * n_states,
                 Support(n_states));
    for (uint32_t k = 0; k < n_states; ++k)
      for (uint32_t i = 0; i < spec.n_actions(Player::kOne); ++i)
        for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j)
          for (const Outcome& o : spec.outcomes(k, i, j))
            if (o.p > 0.0) {
              succ1[static_cast<size_t>(o.c) * n_states + k].set(o.l);
              succ2[static_cast<size_t>(o.d) * n_states + k].set(o.l);
            }
  }

  Support update1(const Support& from, uint32_t c) const {
    Support out(n_states);
    from.for_each(
        [&](uint32_t k) { out.unite_in_place(succ1[static_cast<size_t>(c) * n_states + k]); });
    return out;
  }
  Support update2(const Support& from, uint32_t d) const {
    Support out(n_states);
    from.for_each(
        [&](uint32_t k) { out.unite_in_place(succ2[static_cast<size_t>(d) * n_states + k]); });
    return out;
  }
};

size_t count_violations(const GameSpec& spec, const BeliefTables& tables,
                        const EpisodeTrace& trace, const Support& initial_support) {
  size_t violations = 0;
  Support b1 = initial_support, b2 = initial_support;
  Support p1 = initial_support, p2 = initial_support;
  bool visited = spec.target.test(trace.initial_state);
  if (!initial_support.test(trace.initial_state)) ++violations;
  for (const StepRecord& s : trace.steps) {
    p1 = tables.update1(p1.minus(spec.target), s.c);
    p2 = tables.update2(p2.minus(spec.target), s.d);
    b1 = tables.update1(b1, s.c);
    b2 = tables.update2(b2, s.d);
    if (!b1.test(s.k)) ++violations;
    if (!b2.test(s.k)) ++violations;
    if (!visited && !p1.test(s.k)) ++violations;
    if (!visited && !p2.test(s.k)) ++violations;
    if (spec.target.test(s.k)) visited = true;
  }
  return violations;
}

}  // namespace

double unit_draw(uint64_t seed, uint64_t episode, uint64_t step, uint32_t role) {
  uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ episode);
  h = splitmix64(h ^ step);
  h = splitmix64(h ^ role);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace {

EpisodeTrace run_episode_impl(const GameSpec& spec, const BeliefTables* tables,
                              const FiniteMemoryStrategy& sigma,
                              const FiniteMemoryStrategy& tau, const Distribution& delta,
                              uint32_t horizon, uint64_t seed, uint64_t episode_index,
                              const SupportFamily* certificate) {
  if (sigma.player != Player::kOne || tau.player != Player::kTwo)
    throw std::invalid_argument("run_episode: strategies assigned to the wrong players");
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
  delta.validate();

  const Support initial_support = delta.support();
  EpisodeTrace trace;
  trace.initial_state =
      sample_state(delta, unit_draw(seed, episode_index, 0, kRoleInit));

  uint32_t m1 = init_strategy(sigma, initial_support);
  uint32_t m2 = init_strategy(tau, initial_support);
  uint32_t k = trace.initial_state;

  // Target-stripped P2 belief for the certificate check.
  Support safe_belief = initial_support.minus(spec.target);

  if (spec.target.test(k)) {
    trace.outcome = EpisodeOutcome::kTargetReached;
    trace.outcome_step = 0;
    return trace;
  }
  if (certificate && certificate->contains(safe_belief)) {
    trace.outcome = EpisodeOutcome::kCertifiedSafe;
    trace.outcome_step = 0;
    return trace;
  }

  for (uint32_t step = 1; step <= horizon; ++step) {
    const uint32_t i = sample_from(action_distribution(sigma, m1),
                                   unit_draw(seed, episode_index, step, kRoleAction1));
    const uint32_t j = sample_from(action_distribution(tau, m2),
                                   unit_draw(seed, episode_index, step, kRoleAction2));
    const auto& outs = spec.outcomes(k, i, j);
    if (outs.empty()) throw std::logic_error("run_episode: empty transition distribution");
    const Outcome& o =
        outs[sample_outcome(outs, unit_draw(seed, episode_index, step, kRoleNature))];
    if (spec.act1[o.c] != i || spec.act2[o.d] != j)
      throw std::logic_error("run_episode: sampled signal violates act-consistency");
    trace.steps.push_back({i, j, o.c, o.d, o.l});
    k = o.l;

    m1 = step_strategy(sigma, m1, o.c, unit_draw(seed, episode_index, step, kRoleMemory1));
    m2 = step_strategy(tau, m2, o.d, unit_draw(seed, episode_index, step, kRoleMemory2));

    if (spec.target.test(k)) {
      trace.outcome = EpisodeOutcome::kTargetReached;
      trace.outcome_step = step;
      return trace;
    }
    if (certificate) {
      safe_belief = tables ? tables->update2(safe_belief, o.d).minus(spec.target)
                           : belief_update(spec, Player::kTwo, safe_belief, o.d)
                                 .minus(spec.target);
      if (certificate->contains(safe_belief)) {
        trace.outcome = EpisodeOutcome::kCertifiedSafe;
        trace.outcome_step = step;
        return trace;
      }
    }
  }
  trace.outcome = EpisodeOutcome::kHorizonExhausted;
  trace.outcome_step = horizon;
  return trace;
}

}  // namespace

EpisodeTrace run_episode(const GameSpec& spec, const FiniteMemoryStrategy& sigma,
                         const FiniteMemoryStrategy& tau, const Distribution& delta,
                         uint32_t horizon, uint64_t seed, uint64_t episode_index,
                         const SupportFamily* certificate) {
  return run_episode_impl(spec, nullptr, sigma, tau, delta, horizon, seed, episode_index,
                          certificate);
}

SimulationReport estimate_reach(const GameSpec& spec, const FiniteMemoryStrategy& sigma,
                                const FiniteMemoryStrategy& tau, const Distribution& delta,
                                const SimOptions& options) {
  if (options.episodes < 1)
    throw std::invalid_argument("estimate_reach: episodes must be >= 1");
  SimulationReport report;
  report.episodes = options.episodes;
  report.seed = options.seed;
  report.horizon = options.horizon;
  const Support initial_support = delta.support();
  const bool need_tables = options.check_invariants || options.certificate != nullptr;
  std::optional<BeliefTables> tables;
  if (need_tables) tables.emplace(spec);
  for (uint64_t e = 0; e < options.episodes; ++e) {
    EpisodeTrace trace =
        run_episode_impl(spec, tables ? &*tables : nullptr, sigma, tau, delta,
                         options.horizon, options.seed, e, options.certificate);
    switch (trace.outcome) {
      case EpisodeOutcome::kTargetReached: ++report.reach_count; break;
      case EpisodeOutcome::kCertifiedSafe: ++report.certified_safe_count; break;
      case EpisodeOutcome::kHorizonExhausted: ++report.horizon_exhausted_count; break;
    }
    if (options.check_invariants)
      report.belief_violations += count_violations(spec, *tables, trace, initial_support);
  }
  report.gamma1_hat =
      static_cast<double>(report.reach_count) / static_cast<double>(report.episodes);
  auto [lo, hi] = wilson_interval(report.reach_count, report.episodes);
  report.wilson_low = lo;
  report.wilson_high = hi;
  return report;
}

std::vector<BeliefViolation> check_belief_invariants(const GameSpec& spec,
                                                     const EpisodeTrace& trace,
                                                     const Support& initial_support) {
  std::vector<BeliefViolation> violations;
  Support b1 = initial_support;
  Support b2 = initial_support;
  Support p1 = initial_support;  // raw pessimistic value per step
  Support p2 = initial_support;
  bool visited = spec.target.test(trace.initial_state);
  if (!initial_support.test(trace.initial_state))
    violations.push_back({0, "initial state outside the initial support"});

  for (uint32_t t = 0; t < trace.steps.size(); ++t) {
    const StepRecord& s = trace.steps[t];
    const uint32_t step = t + 1;
    // Raw pessimistic values strip the target before updating.
    p1 = belief_update(spec, Player::kOne, p1.minus(spec.target), s.c);
    p2 = belief_update(spec, Player::kTwo, p2.minus(spec.target), s.d);
    b1 = belief_update(spec, Player::kOne, b1, s.c);
    b2 = belief_update(spec, Player::kTwo, b2, s.d);
    if (!b1.test(s.k))
      violations.push_back({step, "state outside player 1 belief"});
    if (!b2.test(s.k))
      violations.push_back({step, "state outside player 2 belief"});
    if (!visited) {
      if (!p1.test(s.k))
        violations.push_back({step, "state outside player 1 pessimistic belief"});
      if (!p2.test(s.k))
        violations.push_back({step, "state outside player 2 pessimistic belief"});
    }
    if (spec.target.test(s.k)) visited = true;
  }
  return violations;
}

std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double lo = std::max(0.0, center - half);
  double hi = std::min(1.0, center + half);
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return {lo, hi};
}

}  // namespace belief_arena

#include "doctest.h"

#include "belief_arena/arena.hpp"
#include "belief_arena/io.hpp"
#include "belief_arena/positive.hpp"
#include "fixtures.hpp"

using namespace belief_arena;

TEST_SUITE("arena") {

TEST_CASE("coin flips land near one half") {
  GameSpec coin = fixtures::coin();
  FiniteMemoryStrategy sigma = uniform_random_strategy(coin, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(coin, Player::kTwo);
  SimOptions opt;
  opt.episodes = 10000;
  opt.horizon = 10;
  opt.seed = 42;
  SimulationReport rep =
      estimate_reach(coin, sigma, tau, Distribution::uniform(coin.support_of({"s"})), opt);
  CHECK(rep.gamma1_hat > 0.5 - 0.015);
  CHECK(rep.gamma1_hat < 0.5 + 0.015);
  CHECK(rep.wilson_low <= rep.gamma1_hat);
  CHECK(rep.wilson_high >= rep.gamma1_hat);
  CHECK(rep.reach_count + rep.certified_safe_count + rep.horizon_exhausted_count ==
        rep.episodes);
}

TEST_CASE("targetless games never reach and always exhaust the horizon") {
  GameSpec safe = fixtures::safe();
  FiniteMemoryStrategy sigma = uniform_random_strategy(safe, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(safe, Player::kTwo);
  SimOptions opt;
  opt.episodes = 500;
  opt.horizon = 20;
  opt.seed = 9;
  SimulationReport rep =
      estimate_reach(safe, sigma, tau, Distribution::uniform(safe.support_of({"s"})), opt);
  CHECK(rep.gamma1_hat == 0.0);
  CHECK(rep.horizon_exhausted_count == rep.episodes);
}

TEST_CASE("certificates end dead-ended episodes at step one") {
  GameSpec coin = fixtures::coin();
  FiniteMemoryStrategy sigma = uniform_random_strategy(coin, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(coin, Player::kTwo);
  SupportFamily cert(coin.n_states(),
                     Support::full(coin.n_states()).minus(coin.target));
  cert.insert(coin.support_of({"dead"}));
  SimOptions opt;
  opt.episodes = 4000;
  opt.horizon = 50;
  opt.seed = 3;
  opt.certificate = &cert;
  SimulationReport rep =
      estimate_reach(coin, sigma, tau, Distribution::uniform(coin.support_of({"s"})), opt);
  CHECK(rep.certified_safe_count + rep.reach_count == rep.episodes);
  CHECK(rep.certified_safe_count > 0);
  // Certified episodes stop at step 1, where the stripped P2 belief is {dead}.
  EpisodeTrace t = run_episode(coin, sigma, tau,
                               Distribution::uniform(coin.support_of({"s"})), 50, 3, 1,
                               &cert);
  if (t.outcome == EpisodeOutcome::kCertifiedSafe) CHECK(t.outcome_step == 1);

  // Starting inside the certificate certifies at step 0.
  EpisodeTrace t0 = run_episode(coin, sigma, tau,
                                Distribution::uniform(coin.support_of({"dead"})), 50, 3, 0,
                                &cert);
  CHECK(t0.outcome == EpisodeOutcome::kCertifiedSafe);
  CHECK(t0.outcome_step == 0);
}

TEST_CASE("uniform pennies reach almost surely within the horizon") {
  GameSpec pennies = fixtures::pennies();
  FiniteMemoryStrategy sigma = uniform_random_strategy(pennies, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(pennies, Player::kTwo);
  SimOptions opt;
  opt.episodes = 10000;
  opt.horizon = 1000;
  opt.seed = 8;
  SimulationReport rep = estimate_reach(
      pennies, sigma, tau, Distribution::uniform(pennies.support_of({"init"})), opt);
  CHECK(rep.gamma1_hat >= 0.99);
}

TEST_CASE("reports are bit-identical for identical inputs") {
  GameSpec trap = fixtures::pennies_trap();
  FiniteMemoryStrategy sigma = uniform_random_strategy(trap, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(trap, Player::kTwo);
  SimOptions opt;
  opt.episodes = 1500;
  opt.horizon = 30;
  opt.seed = 123;
  Distribution delta = Distribution::uniform(trap.support_of({"init"}));
  SimulationReport a = estimate_reach(trap, sigma, tau, delta, opt);
  SimulationReport b = estimate_reach(trap, sigma, tau, delta, opt);
  CHECK(write_simulation_report(trap.name, a) == write_simulation_report(trap.name, b));
}

TEST_CASE("initial states inside the target reach at step zero") {
  GameSpec coin = fixtures::coin();
  FiniteMemoryStrategy sigma = uniform_random_strategy(coin, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(coin, Player::kTwo);
  EpisodeTrace t = run_episode(coin, sigma, tau,
                               Distribution::uniform(coin.support_of({"win"})), 10, 1);
  CHECK(t.outcome == EpisodeOutcome::kTargetReached);
  CHECK(t.outcome_step == 0);
}

TEST_CASE("mismatched players are refused") {
  GameSpec coin = fixtures::coin();
  FiniteMemoryStrategy sigma = uniform_random_strategy(coin, Player::kOne);
  FiniteMemoryStrategy tau = uniform_random_strategy(coin, Player::kTwo);
  CHECK_THROWS(run_episode(coin, tau, tau, Distribution::uniform(coin.support_of({"s"})),
                           10, 1));
  CHECK_THROWS(run_episode(coin, sigma, sigma,
                           Distribution::uniform(coin.support_of({"s"})), 10, 1));
}

TEST_CASE("belief invariants hold along sampled plays") {
  for (const auto& g : {fixtures::coin(), fixtures::pennies(), fixtures::pennies_trap()}) {
    FiniteMemoryStrategy sigma = uniform_random_strategy(g, Player::kOne);
    FiniteMemoryStrategy tau = uniform_random_strategy(g, Player::kTwo);
    Distribution delta = Distribution::uniform(Support::full(g.n_states()));
    for (uint64_t e = 0; e < 200; ++e) {
      EpisodeTrace t = run_episode(g, sigma, tau, delta, 50, 17, e);
      CHECK(check_belief_invariants(g, t, delta.support()).empty());
    }
  }
}

TEST_CASE("forged traces are caught") {
  GameSpec pennies = fixtures::pennies();
  EpisodeTrace forged;
  forged.initial_state = static_cast<uint32_t>(pennies.state_index("init"));
  // Claim the play jumped straight to win with the n/x signals: impossible.
  forged.steps.push_back({0, 0, g_sig1(pennies, "cn"), g_sig2(pennies, "dx"),
                          static_cast<uint32_t>(pennies.state_index("win"))});
  forged.outcome = EpisodeOutcome::kTargetReached;
  forged.outcome_step = 1;
  auto violations =
      check_belief_invariants(pennies, forged, pennies.support_of({"init"}));
  CHECK_FALSE(violations.empty());
}

TEST_CASE("pessimistic exemption after a target visit") {
  GameSpec pennies = fixtures::pennies();
  // A play that wins at step 2 and then keeps going (win is absorbing).
  EpisodeTrace t;
  t.initial_state = static_cast<uint32_t>(pennies.state_index("init"));
  const uint32_t hL = static_cast<uint32_t>(pennies.state_index("hL"));
  const uint32_t win = static_cast<uint32_t>(pennies.state_index("win"));
  const uint32_t n = 0, l = 1, x = 0;
  t.steps.push_back({n, x, g_sig1(pennies, "cn"), g_sig2(pennies, "dx"), hL});
  t.steps.push_back({l, x, g_sig1(pennies, "cl"), g_sig2(pennies, "dx"), win});
  t.steps.push_back({l, x, g_sig1(pennies, "cl"), g_sig2(pennies, "dx"), win});
  t.outcome = EpisodeOutcome::kTargetReached;
  t.outcome_step = 2;
  auto violations = check_belief_invariants(pennies, t, pennies.support_of({"init"}));
  CHECK(violations.empty());
}

TEST_CASE("wilson intervals behave at the edges") {
  auto [lo0, hi0] = wilson_interval(0, 100);
  CHECK(lo0 == 0.0);
  CHECK(hi0 > 0.0);
  auto [lo1, hi1] = wilson_interval(100, 100);
  CHECK(hi1 == 1.0);
  CHECK(lo1 < 1.0);
  auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
}

}  // TEST_SUITE

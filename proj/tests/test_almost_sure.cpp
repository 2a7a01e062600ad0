#include "doctest.h"

#include <set>

#include "belief_arena/almost_sure.hpp"
#include "belief_arena/arena.hpp"
#include "belief_arena/io.hpp"
#include "fixtures.hpp"

using namespace belief_arena;

namespace {

SupportFamily empty_family(const GameSpec& g) { return SupportFamily(g.n_states()); }

}  // namespace

TEST_SUITE("almost_sure") {

TEST_CASE("product game shapes") {
  GameSpec safe = fixtures::safe();
  ProductGame ps = build_product_game(safe, empty_family(safe), {safe.support_of({"s"})});
  CHECK(ps.game.n_states() == 1);
  CHECK(ps.state_info[0].second == safe.support_of({"s"}));
  CHECK(validate_game(ps.game).ok);

  GameSpec pennies = fixtures::pennies();
  ProductGame pp = build_product_game(pennies, empty_family(pennies),
                                      {pennies.support_of({"init"})});
  CHECK(pp.game.n_states() == 4);
  CHECK(pp.index_of.count({static_cast<uint32_t>(pennies.state_index("init")),
                           pennies.support_of({"init"})}));
  CHECK(pp.index_of.count({static_cast<uint32_t>(pennies.state_index("hL")),
                           pennies.support_of({"hL", "hR"})}));
  CHECK(pp.index_of.count({static_cast<uint32_t>(pennies.state_index("hR")),
                           pennies.support_of({"hL", "hR"})}));
  CHECK(pp.index_of.count({static_cast<uint32_t>(pennies.state_index("win")),
                           Support(pennies.n_states())}));
  CHECK(validate_game(pp.game).ok);
  for (uint32_t s = 0; s < pp.game.n_states(); ++s)
    CHECK(pp.is_target[s] == (pp.state_info[s].second.empty()));

  SupportFamily bad(pennies.n_states(),
                    Support::full(pennies.n_states()).minus(pennies.target));
  bad.insert(pennies.support_of({"hL", "hR"}));
  ProductGame pb = build_product_game(pennies, bad, {pennies.support_of({"init"})});
  const uint32_t hl = pb.index_of.at({static_cast<uint32_t>(pennies.state_index("hL")),
                                      pennies.support_of({"hL", "hR"})});
  CHECK(pb.absorbing_bad[hl]);
  // Absorbing-bad states loop back to themselves.
  CHECK(pb.game.outcomes(hl, 0, 0).size() == 1);
  CHECK(pb.game.outcomes(hl, 0, 0)[0].l == hl);
}

TEST_CASE("product transitions preserve the original probabilities") {
  GameSpec coin = fixtures::coin();
  ProductGame pc = build_product_game(coin, empty_family(coin), {coin.support_of({"s"})});
  const uint32_t s0 = pc.index_of.at({static_cast<uint32_t>(coin.state_index("s")),
                                      coin.support_of({"s"})});
  const auto& outs = pc.game.outcomes(s0, 0, 0);
  REQUIRE(outs.size() == 2);
  CHECK(outs[0].p == doctest::Approx(0.5));
  CHECK(outs[1].p == doctest::Approx(0.5));
}

TEST_CASE("solve_l_game level one on the fixtures") {
  GameSpec pennies = fixtures::pennies();
  SupportFamily exam = examined_closure(pennies, {pennies.support_of({"init"})});
  LGameResult res = solve_l_game(pennies, empty_family(pennies), exam);
  CHECK(res.as_p1.contains(pennies.support_of({"init"})));
  CHECK(res.pos_p2.empty());
  // Allowed actions at the post-hide belief include both guesses.
  const Support guess_belief = pennies.support_of({"hL", "hR"});
  REQUIRE(res.allowed_actions.count(guess_belief));
  CHECK(res.allowed_actions.at(guess_belief).size() == 3);

  GameSpec trap = fixtures::pennies_trap();
  SupportFamily exam_t = examined_closure(trap, {trap.support_of({"init"})});
  LGameResult res_t = solve_l_game(trap, empty_family(trap), exam_t);
  CHECK(res_t.pos_p2.contains(trap.support_of({"init"})));
  CHECK_FALSE(res_t.as_p1.contains(trap.support_of({"init"})));

  // Supports already in the family lose immediately.
  GameSpec safe = fixtures::safe();
  SupportFamily fam(safe.n_states());
  fam.insert(safe.support_of({"s"}));
  SupportFamily exam_s = examined_closure(safe, {safe.support_of({"s"})});
  LGameResult res_s = solve_l_game(safe, fam, exam_s);
  CHECK(res_s.pos_p2.contains(safe.support_of({"s"})));

  // Non-upward-closed families are refused.
  GameSpec coin = fixtures::coin();
  SupportFamily notup(coin.n_states());
  notup.insert(coin.support_of({"s"}));
  SupportFamily exam_c = examined_closure(coin, {coin.support_of({"s", "dead"})});
  if (exam_c.contains(coin.support_of({"s", "dead"})))
    CHECK_THROWS_AS(solve_l_game(coin, notup, exam_c), std::invalid_argument);
}

TEST_CASE("chains on the fixtures") {
  GameSpec safe = fixtures::safe();
  LChain cs = almost_sure_iteration(safe, examined_closure(safe, {safe.support_of({"s"})}));
  CHECK(cs.distinct_levels() == 2);  // {} then {{s}}
  CHECK(cs.limit().contains(safe.support_of({"s"})));
  CHECK(cs.classes.at(safe.support_of({"s"})) == ThreeWayClass::kSureP2);

  GameSpec pennies = fixtures::pennies();
  LChain cp = almost_sure_iteration(pennies,
                                    examined_closure(pennies, {pennies.support_of({"init"})}));
  CHECK(cp.limit().empty());
  CHECK(cp.classes.at(pennies.support_of({"init"})) == ThreeWayClass::kAlmostSureP1);

  GameSpec coin = fixtures::coin();
  LChain cc = almost_sure_iteration(coin, examined_closure(coin, {coin.support_of({"s"})}));
  CHECK(cc.limit().contains(coin.support_of({"s"})));
  CHECK(cc.classes.at(coin.support_of({"s"})) == ThreeWayClass::kPositiveBoth);

  // Single-level sufficiency on the fixtures without pessimistic-belief traps.
  CHECK(cc.distinct_levels() == 2);
  CHECK(cs.distinct_levels() == 2);
}

TEST_CASE("chain structure invariants over the full lattice") {
  for (const auto& g : {fixtures::coin(), fixtures::safe(), fixtures::pennies(),
                        fixtures::pennies_trap()}) {
    SupportFamily exam = full_support_lattice(g);
    LChain chain = almost_sure_iteration(g, exam);
    const auto members = exam.sorted_members();
    // Monotone, upward-closed levels; stabilization within |examined|+1.
    CHECK(chain.levels.size() <= exam.size() + 2);
    CHECK(chain.levels.front().empty());
    for (size_t n = 0; n + 1 < chain.levels.size(); ++n) {
      for (const Support& L : chain.levels[n].sorted_members())
        CHECK(chain.levels[n + 1].contains(L));
      CHECK(chain.levels[n].upward_closed_within(members));
    }
    CHECK(chain.levels[chain.levels.size() - 1] == chain.levels[chain.levels.size() - 2]);
    // Exactly one class per examined support, with the nesting checks.
    for (const Support& L : members) {
      ThreeWayClass cls = chain.classes.at(L);
      PositiveClass pos = classify_positive(g, L);
      if (cls == ThreeWayClass::kAlmostSureP1) CHECK(pos == PositiveClass::kPosP1);
      if (cls == ThreeWayClass::kSureP2) {
        CHECK(pos == PositiveClass::kSureP2);
        CHECK(chain.limit().contains(L));
      }
    }
  }
}

TEST_CASE("classify_support on the fixtures") {
  GameSpec coin = fixtures::coin();
  CHECK(classify_support(coin, coin.support_of({"s"})) == ThreeWayClass::kPositiveBoth);
  GameSpec safe = fixtures::safe();
  CHECK(classify_support(safe, safe.support_of({"s"})) == ThreeWayClass::kSureP2);
  GameSpec pennies = fixtures::pennies();
  CHECK(classify_support(pennies, pennies.support_of({"init"})) ==
        ThreeWayClass::kAlmostSureP1);
  GameSpec trap = fixtures::pennies_trap();
  CHECK(classify_support(trap, trap.support_of({"init"})) == ThreeWayClass::kPositiveBoth);
  CHECK_THROWS(classify_support(coin, Support(coin.n_states())));
}

TEST_CASE("almost-sure strategy synthesis for the pennies game") {
  GameSpec pennies = fixtures::pennies();
  SupportFamily exam = examined_closure(pennies, {pennies.support_of({"init"})});
  LChain chain = almost_sure_iteration(pennies, exam);
  FiniteMemoryStrategy sigma = synthesize_as_p1(pennies, chain, pennies.support_of({"init"}));
  sigma.validate(pennies);

  // Memory: the two pessimistic beliefs plus the won state.
  std::set<std::string> labels;
  for (const auto& lab : sigma.memory) labels.insert(lab.text);
  CHECK(labels.count("pbelief {hL,hR}"));
  CHECK(labels.count("pbelief {init}"));

  uint32_t m = init_strategy(sigma, pennies.support_of({"init"}));
  m = step_strategy(sigma, m, g_sig1(pennies, "cn"), 0.0);
  CHECK(sigma.memory[m].support == pennies.support_of({"hL", "hR"}));
  CHECK(action_distribution(sigma, m).size() == 3);  // n, l and r all allowed

  // The guess belief folds back to {init} on a miss.
  uint32_t m2 = step_strategy(sigma, m, g_sig1(pennies, "cr"), 0.0);
  CHECK(sigma.memory[m2].support == pennies.support_of({"init"}));

  // Refusals carry the classification.
  GameSpec coin = fixtures::coin();
  LChain cc = almost_sure_iteration(coin, examined_closure(coin, {coin.support_of({"s"})}));
  CHECK_THROWS_WITH_AS(synthesize_as_p1(coin, cc, coin.support_of({"s"})),
                       doctest::Contains("positive_both"), std::invalid_argument);
}

TEST_CASE("almost-sure synthesis from a support already inside the target") {
  GameSpec coin = fixtures::coin();
  Support win = coin.support_of({"win"});
  SupportFamily exam = examined_closure(coin, {win});
  LChain chain = almost_sure_iteration(coin, exam);
  CHECK(chain.classes.at(win) == ThreeWayClass::kAlmostSureP1);
  FiniteMemoryStrategy sigma = synthesize_as_p1(coin, chain, win);
  sigma.validate(coin);
  CHECK(sigma.n_memory() == 1);  // just the won state
  CHECK(init_strategy(sigma, win) == 0);
}

TEST_CASE("pennies almost-sure strategy wins against random adversaries") {
  GameSpec pennies = fixtures::pennies();
  SupportFamily exam = examined_closure(pennies, {pennies.support_of({"init"})});
  LChain chain = almost_sure_iteration(pennies, exam);
  FiniteMemoryStrategy sigma = synthesize_as_p1(pennies, chain, pennies.support_of({"init"}));
  Distribution delta = Distribution::uniform(pennies.support_of({"init"}));
  for (uint64_t a = 0; a < 5; ++a) {
    FiniteMemoryStrategy tau = random_finite_memory_strategy(pennies, Player::kTwo, 4, a);
    SimOptions opt;
    opt.episodes = 2000;
    opt.horizon = 500;
    opt.seed = 1000 + a;
    SimulationReport rep = estimate_reach(pennies, sigma, tau, delta, opt);
    CHECK(static_cast<double>(rep.reach_count) / rep.episodes >= 0.99);
  }
}

TEST_CASE("switching strategy for the coin game") {
  GameSpec coin = fixtures::coin();
  SupportFamily exam = examined_closure(coin, {coin.support_of({"s"})});
  LChain chain = almost_sure_iteration(coin, exam);
  FiniteMemoryStrategy tau = synthesize_positive_p2(coin, chain, coin.support_of({"s"}));
  tau.validate(coin);
  // Roaming at level 1; certificate states exist for the dead belief.
  uint32_t m = init_strategy(tau, coin.support_of({"s"}));
  CHECK(tau.memory[m].kind == MemoryLabel::Kind::kRoam);
  CHECK(tau.memory[m].level == 1);
  bool has_cert = false;
  for (const auto& lab : tau.memory)
    if (lab.kind == MemoryLabel::Kind::kCertificate) has_cert = true;
  CHECK(has_cert);

  // Never-reach frequency sits near one half whatever the strategies do.
  FiniteMemoryStrategy sigma = uniform_random_strategy(coin, Player::kOne);
  SimOptions opt;
  opt.episodes = 10000;
  opt.horizon = 60;
  opt.seed = 77;
  SimulationReport rep =
      estimate_reach(coin, sigma, tau, Distribution::uniform(coin.support_of({"s"})), opt);
  const double avoid = 1.0 - rep.gamma1_hat;
  CHECK(avoid > 0.5 - 0.015);
  CHECK(avoid < 0.5 + 0.015);

  // Refusal from an almost-sure support.
  GameSpec pennies = fixtures::pennies();
  SupportFamily examp = examined_closure(pennies, {pennies.support_of({"init"})});
  LChain cp = almost_sure_iteration(pennies, examp);
  CHECK_THROWS_WITH_AS(synthesize_positive_p2(pennies, cp, pennies.support_of({"init"})),
                       doctest::Contains("almost_sure_p1"), std::invalid_argument);
}

TEST_CASE("switching strategy on the targetless game never reaches") {
  GameSpec safe = fixtures::safe();
  SupportFamily exam = examined_closure(safe, {safe.support_of({"s"})});
  LChain chain = almost_sure_iteration(safe, exam);
  FiniteMemoryStrategy tau = synthesize_positive_p2(safe, chain, safe.support_of({"s"}));
  tau.validate(safe);
  FiniteMemoryStrategy sigma = uniform_random_strategy(safe, Player::kOne);
  SimOptions opt;
  opt.episodes = 500;
  opt.horizon = 30;
  opt.seed = 2;
  SimulationReport rep =
      estimate_reach(safe, sigma, tau, Distribution::uniform(safe.support_of({"s"})), opt);
  CHECK(rep.reach_count == 0);
}

TEST_CASE("switching strategy avoids with frequency about one half in the trap") {
  GameSpec trap = fixtures::pennies_trap();
  SupportFamily exam = examined_closure(trap, {trap.support_of({"init"})});
  LChain chain = almost_sure_iteration(trap, exam);
  FiniteMemoryStrategy tau = synthesize_positive_p2(trap, chain, trap.support_of({"init"}));
  FiniteMemoryStrategy sigma = uniform_random_strategy(trap, Player::kOne);
  SimOptions opt;
  opt.episodes = 10000;
  opt.horizon = 60;
  opt.seed = 5;
  SimulationReport rep =
      estimate_reach(trap, sigma, tau, Distribution::uniform(trap.support_of({"init"})), opt);
  const double avoid = 1.0 - rep.gamma1_hat;
  CHECK(avoid > 0.5 - 0.015);
  CHECK(avoid < 0.5 + 0.015);
}

TEST_CASE("allowed actions keep successors inside the almost-sure region") {
  for (const auto& g : {fixtures::coin(), fixtures::pennies(), fixtures::pennies_trap()}) {
    SupportFamily exam = full_support_lattice(g);
    LChain chain = almost_sure_iteration(g, exam);
    const LGameResult& res = chain.results.back();
    for (const auto& [B, acts] : res.allowed_actions) {
      CHECK_FALSE(acts.empty());
      for (uint32_t i : acts) {
        for (uint32_t c = 0; c < g.n_signals(Player::kOne); ++c) {
          if (g.act1[c] != i) continue;
          Support raw = belief_update(g, Player::kOne, B, c);
          if (raw.empty()) continue;
          Support next = raw.minus(g.target);
          if (next.empty()) continue;
          CHECK(res.allowed_actions.count(next));
        }
      }
    }
  }
}

}  // TEST_SUITE

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Sweeps the four shipped fixtures plus a deterministic generated
// corpus, checking the solvers against the independent oracles and the
// synthesized strategies against seeded simulation at pinned thresholds.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "belief_arena/almost_sure.hpp"
#include "belief_arena/arena.hpp"
#include "belief_arena/io.hpp"
#include "belief_arena/oracle.hpp"
#include "belief_arena/positive.hpp"
#include "fixtures.hpp"

using namespace belief_arena;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr uint64_t kEpisodes = 10000;
constexpr uint32_t kSafetyHorizon = 200;    // criterion 4
constexpr uint32_t kReachHorizon = 1000;    // criteria 5 and 6
constexpr double kReachBar = 0.99;          // criterion 5
constexpr double kHalfBand = 0.015;         // 3 Wilson standard errors at p=1/2
constexpr double kOracleSweepBudget = 300.0;  // seconds, criterion 1
constexpr double kPipelineBudget = 60.0;      // seconds per game, criterion 11
constexpr double kFiveStateBudget = 600.0;    // seconds, criterion 11

int g_failures = 0;
uint64_t g_belief_violations = 0;  // aggregated over criteria 4-6 (criterion 8)

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct GameBundle {
  GameSpec spec;
  bool fixture = false;
  SupportFamily lattice{0};        // all nonempty supports
  LChain chain;                    // full-lattice chain
  PositivePartition partition;     // safety gfp over the full safety lattice
};

std::vector<GameBundle> build_corpus() {
  std::vector<GameBundle> corpus;
  for (const char* name : {"coin", "safe", "pennies", "pennies_trap"}) {
    GameBundle b;
    b.spec = fixtures::load(name);
    b.fixture = true;
    corpus.push_back(std::move(b));
  }
  for (uint64_t seed = 1; seed <= 300; ++seed) {
    GeneratorProfile p;
    p.states = 2 + seed % 4;  // 2..5 states, one target: at most 4 outside T
    p.targets = 1;
    p.actions1 = 1 + seed % 2;
    p.actions2 = 1 + (seed / 2) % 2;
    p.signals1 = std::min<uint32_t>(2, p.actions1 + (seed / 4) % 2);
    p.signals2 = std::min<uint32_t>(2, p.actions2 + (seed / 8) % 2);
    p.max_outcomes = 1 + seed % 3;
    p.denominator = (seed / 3) % 2 ? 8 : 4;
    GameBundle b;
    b.spec = generate_random_game(p, seed);
    corpus.push_back(std::move(b));
  }
  for (auto& b : corpus) {
    b.lattice = full_support_lattice(b.spec);
    b.chain = almost_sure_iteration(b.spec, b.lattice);
    b.partition = sure_safety_fixpoint(b.spec, b.lattice);
  }
  return corpus;
}

bool positive_for_p1(const GameBundle& b, const Support& L) {
  return L.intersects(b.spec.target) || !b.partition.sure_p2.contains(L);
}

// Simulation points for criteria 4-6: every nonempty support of the
// fixtures; the declared initial support plus every singleton of each
// generated game.
std::vector<Support> sim_points(const GameBundle& b) {
  if (b.fixture) return b.lattice.sorted_members();
  std::vector<Support> points{initial_distribution(b.spec).support()};
  for (uint32_t k = 0; k < b.spec.n_states(); ++k) {
    Support single(b.spec.n_states());
    single.set(k);
    if (!(single == points.front())) points.push_back(single);
  }
  return points;
}

uint64_t sim_seed(size_t game, size_t point, size_t adversary) {
  return 0x9E3779B9ull * (game + 1) + 8191 * point + adversary;
}

void criterion_1(const std::vector<GameBundle>& corpus) {
  auto start = Clock::now();
  size_t mismatches = 0;
  for (const auto& b : corpus) {
    SupportFamily losing = losing_supports_least_fixpoint(b.spec);
    for (const Support& L : full_safety_lattice(b.spec).sorted_members())
      if (losing.contains(L) == b.partition.sure_p2.contains(L)) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  report(1, mismatches == 0 && elapsed < kOracleSweepBudget,
         "gfp/lfp duality on " + std::to_string(corpus.size()) + " games: " +
             std::to_string(mismatches) + " mismatches, " + std::to_string(elapsed) +
             " s");
}

void criterion_2(const std::vector<GameBundle>& corpus) {
  size_t violations = 0, supports = 0;
  for (const auto& b : corpus) {
    for (const Support& L : b.lattice.sorted_members()) {
      ++supports;
      auto it = b.chain.classes.find(L);
      if (it == b.chain.classes.end()) {
        ++violations;  // no class assigned
        continue;
      }
      const bool pos = positive_for_p1(b, L);
      switch (it->second) {
        case ThreeWayClass::kAlmostSureP1:
          if (!pos) ++violations;
          break;
        case ThreeWayClass::kSureP2:
          if (pos || !b.chain.limit().contains(L)) ++violations;
          break;
        case ThreeWayClass::kPositiveBoth:
          if (!pos || !b.chain.limit().contains(L)) ++violations;
          break;
      }
    }
  }
  report(2, violations == 0,
         "three-way partition and nesting on " + std::to_string(supports) +
             " supports: " + std::to_string(violations) + " violations");
}

void criterion_3(const std::vector<GameBundle>& corpus) {
  size_t mismatches = 0;
  for (const auto& b : corpus)
    for (const Support& L : b.lattice.sorted_members())
      if (classify_support(b.spec, L) != b.chain.classes.at(L)) ++mismatches;
  report(3, mismatches == 0,
         "reachable-closure vs full-lattice classification: " +
             std::to_string(mismatches) + " mismatches");
}

void criteria_4_to_6(std::vector<GameBundle>& corpus) {
  size_t sure_points = 0, sure_visits = 0;
  size_t as_points = 0, as_failures = 0;
  size_t pos_points = 0, pos_failures = 0;
  bool coin_band_ok = true, trap_band_ok = true;

  for (size_t gi = 0; gi < corpus.size(); ++gi) {
    GameBundle& b = corpus[gi];
    FiniteMemoryStrategy uniform1 = uniform_random_strategy(b.spec, Player::kOne);
    FiniteMemoryStrategy uniform2 = uniform_random_strategy(b.spec, Player::kTwo);
    FiniteMemoryStrategy pess_adv = total_pessimistic_adversary(b.spec, b.chain);

    // The switching adversary exists whenever the chain limit is nonempty.
    bool have_switching = !b.chain.limit().empty();
    FiniteMemoryStrategy switching;
    if (have_switching)
      switching = synthesize_positive_p2(b.spec, b.chain,
                                         b.chain.limit().sorted_members().front());

    const auto points = sim_points(b);
    for (size_t pi = 0; pi < points.size(); ++pi) {
      const Support& L = points[pi];
      const Distribution delta = Distribution::uniform(L);
      const ThreeWayClass cls = b.chain.classes.at(L);

      if (cls == ThreeWayClass::kSureP2) {
        // Criterion 4: zero target visits for the sure-safety witness.
        ++sure_points;
        FiniteMemoryStrategy safe_strategy = synthesize_sure_p2(b.spec, b.partition);
        int ai = 0;
        for (const FiniteMemoryStrategy* adv : {&uniform1, &pess_adv}) {
          SimOptions opt;
          opt.episodes = kEpisodes;
          opt.horizon = kSafetyHorizon;
          opt.seed = sim_seed(gi, pi, ai++);
          opt.check_invariants = true;
          SimulationReport rep = estimate_reach(b.spec, *adv, safe_strategy, delta, opt);
          sure_visits += rep.reach_count;
          g_belief_violations += rep.belief_violations;
        }
      } else if (cls == ThreeWayClass::kAlmostSureP1) {
        // Criterion 5: reach at least 0.99 against the adversary suite.
        ++as_points;
        FiniteMemoryStrategy sigma = synthesize_as_p1(b.spec, b.chain, L);
        std::vector<FiniteMemoryStrategy> suite;
        suite.push_back(uniform2);
        if (have_switching) suite.push_back(switching);
        for (uint64_t r = 0; r < 20; ++r)
          suite.push_back(
              random_finite_memory_strategy(b.spec, Player::kTwo, 4, 1000 * gi + r));
        for (size_t ai = 0; ai < suite.size(); ++ai) {
          SimOptions opt;
          opt.episodes = kEpisodes;
          opt.horizon = kReachHorizon;
          opt.seed = sim_seed(gi, pi, ai);
          opt.check_invariants = true;
          SimulationReport rep = estimate_reach(b.spec, sigma, suite[ai], delta, opt);
          g_belief_violations += rep.belief_violations;
          if (rep.gamma1_hat < kReachBar) ++as_failures;
        }
      } else {
        // Criterion 6: both positive witnesses in one uniform-vs-switching run
        // with the sure-safety certificate consulted.
        ++pos_points;
        SimOptions opt;
        opt.episodes = kEpisodes;
        opt.horizon = kReachHorizon;
        opt.seed = sim_seed(gi, pi, 97);
        opt.check_invariants = true;
        opt.certificate = &b.partition.sure_p2;
        FiniteMemoryStrategy& tau = have_switching ? switching : uniform2;
        SimulationReport rep = estimate_reach(b.spec, uniform1, tau, delta, opt);
        g_belief_violations += rep.belief_violations;
        const uint64_t avoided = rep.certified_safe_count + rep.horizon_exhausted_count;
        if (rep.reach_count < 1 || avoided < 1) ++pos_failures;

        if (b.fixture) {
          const bool is_coin = b.spec.name == "coin" &&
                               L == b.spec.support_of({"s"});
          const bool is_trap = b.spec.name == "pennies_trap" &&
                               L == b.spec.support_of({"init"});
          if (is_coin || is_trap) {
            const double avoid_hat = static_cast<double>(avoided) / rep.episodes;
            const bool in_band = rep.gamma1_hat > 0.5 - kHalfBand &&
                                 rep.gamma1_hat < 0.5 + kHalfBand &&
                                 avoid_hat > 0.5 - kHalfBand &&
                                 avoid_hat < 0.5 + kHalfBand;
            if (is_coin) coin_band_ok = in_band;
            if (is_trap) trap_band_ok = in_band;
          }
        }
      }
    }
  }

  report(4, sure_visits == 0,
         "sure-safety witness on " + std::to_string(sure_points) + " supports: " +
             std::to_string(sure_visits) + " target visits");
  report(5, as_failures == 0,
         "almost-sure witness on " + std::to_string(as_points) + " supports: " +
             std::to_string(as_failures) + " runs below 0.99");
  report(6, pos_failures == 0 && coin_band_ok && trap_band_ok,
         "positive witnesses on " + std::to_string(pos_points) + " supports: " +
             std::to_string(pos_failures) + " missing, coin band " +
             (coin_band_ok ? "ok" : "off") + ", trap band " +
             (trap_band_ok ? "ok" : "off"));
}

void criterion_7(const std::vector<GameBundle>& corpus) {
  size_t failures = 0, checked = 0;
  for (const auto& b : corpus) {
    const uint32_t horizon = 1u << b.spec.n_states();
    for (const Support& L : b.lattice.sorted_members()) {
      if (!positive_for_p1(b, L)) continue;
      ++checked;
      Rat witness = bounded_minmax_reach(b.spec, Distribution::uniform(L), horizon);
      if (!(witness > Rat())) ++failures;
    }
  }
  report(7, failures == 0,
         "bounded positive-reach witnesses on " + std::to_string(checked) +
             " supports: " + std::to_string(failures) + " failures");
}

void criterion_8() {
  report(8, g_belief_violations == 0,
         "belief invariants during simulation: " + std::to_string(g_belief_violations) +
             " violations");
}

void criterion_9(const std::vector<GameBundle>& corpus) {
  size_t violations = 0;
  for (const auto& b : corpus) {
    const auto members = b.lattice.sorted_members();
    if (!b.chain.levels.front().empty()) ++violations;
    if (b.chain.levels.size() > b.lattice.size() + 2) ++violations;
    if (!(b.chain.levels[b.chain.levels.size() - 1] ==
          b.chain.levels[b.chain.levels.size() - 2]))
      ++violations;
    for (size_t n = 0; n + 1 < b.chain.levels.size(); ++n) {
      for (const Support& L : b.chain.levels[n].sorted_members())
        if (!b.chain.levels[n + 1].contains(L)) ++violations;
      if (!b.chain.levels[n].upward_closed_within(members)) ++violations;
    }
  }
  report(9, violations == 0,
         "chain monotonicity, upward closure and stabilization: " +
             std::to_string(violations) + " violations");
}

void criterion_10() {
  size_t mismatches = 0, games = 0;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorProfile p;
    p.revealing = true;
    p.states = 2 + seed % 3;
    p.targets = 1;
    p.actions1 = 1 + seed % 2;
    p.actions2 = 1 + (seed / 2) % 2;
    p.max_outcomes = 1 + seed % 3;
    GameSpec g = generate_random_game(p, seed);
    ++games;
    auto classes = perfect_info_solver(g);
    for (uint32_t k = 0; k < g.n_states(); ++k) {
      Support single(g.n_states());
      single.set(k);
      if (classes[k] != classify_support(g, single)) ++mismatches;
    }
  }
  report(10, mismatches == 0,
         "perfect-information agreement on " + std::to_string(games) + " games: " +
             std::to_string(mismatches) + " mismatches");
}

void criterion_11(const std::vector<GameBundle>& corpus) {
  double worst = 0.0;
  for (const auto& b : corpus) {
    auto start = Clock::now();
    const Support init = initial_distribution(b.spec).support();
    SupportFamily examined = examined_closure(b.spec, {init});
    LChain chain = almost_sure_iteration(b.spec, examined);
    PositivePartition part = sure_safety_fixpoint(b.spec, examined);
    const ThreeWayClass cls = chain.classes.at(init);
    if (cls == ThreeWayClass::kAlmostSureP1)
      (void)synthesize_as_p1(b.spec, chain, init);
    else if (chain.limit().contains(init))
      (void)synthesize_positive_p2(b.spec, chain, init);
    (void)write_classification_report(b.spec, chain, part);
    worst = std::max(worst, seconds_since(start));
  }

  // A five-state game under the reachable-closure restriction.
  GeneratorProfile p5;
  p5.states = 5;
  p5.targets = 1;
  p5.max_outcomes = 3;
  GameSpec g5 = generate_random_game(p5, 11);
  auto start5 = Clock::now();
  SupportFamily examined5 = examined_closure(g5, {Support::full(g5.n_states())});
  LChain chain5 = almost_sure_iteration(g5, examined5);
  PositivePartition part5 = sure_safety_fixpoint(g5, examined5);
  (void)write_classification_report(g5, chain5, part5);
  const double five_state = seconds_since(start5);

  report(11, worst < kPipelineBudget && five_state < kFiveStateBudget,
         "pipeline timing: worst corpus game " + std::to_string(worst) +
             " s, five-state run " + std::to_string(five_state) + " s");
}

}  // namespace

int main() {
  auto start = Clock::now();
  std::vector<GameBundle> corpus = build_corpus();
  std::printf("corpus: %zu games (4 fixtures + 300 generated), full support lattices\n",
              corpus.size());

  criterion_1(corpus);
  criterion_2(corpus);
  criterion_3(corpus);
  criteria_4_to_6(corpus);
  criterion_7(corpus);
  criterion_8();
  criterion_9(corpus);
  criterion_10();
  criterion_11(corpus);

  std::printf("acceptance finished in %.1f s with %d failing criteria\n",
              seconds_since(start), g_failures);
  return g_failures;
}

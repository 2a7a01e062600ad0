// Command-line front end: validate, classify, synthesize, simulate,
// oracle-check and gen subcommands over the line-oriented game format.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "belief_arena/almost_sure.hpp"
#include "belief_arena/arena.hpp"
#include "belief_arena/io.hpp"
#include "belief_arena/oracle.hpp"
#include "belief_arena/positive.hpp"

#include "json.hpp"

using namespace belief_arena;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string stem_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

GameSpec load_game(const std::string& path) {
  return parse_game(read_file(path), stem_of(path));
}

uint64_t default_seed() {
  if (const char* env = std::getenv("BELIEF_ARENA_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

FiniteMemoryStrategy load_strategy(const std::string& arg, const GameSpec& spec,
                                   Player player) {
  if (arg == "random") return uniform_random_strategy(spec, player);
  FiniteMemoryStrategy s = parse_strategy(read_file(arg), spec);
  if (s.player != player)
    throw std::invalid_argument(arg + " holds a strategy for the other player");
  return s;
}

int cmd_validate(const std::string& game_path) {
  GameSpec spec = parse_game(read_file(game_path), stem_of(game_path),
                             /*refuse_invalid=*/false);
  ValidationReport report = validate_game(spec);
  std::cout << write_validation_report(spec.name, report);
  return report.ok ? 0 : 1;
}

int cmd_classify(const std::string& game_path, const std::string& init_arg,
                 bool full_lattice, const std::string& out_path) {
  GameSpec spec = load_game(game_path);
  Support init = init_arg.empty() ? initial_distribution(spec).support()
                                  : parse_support_names(spec, init_arg);
  SupportFamily examined =
      full_lattice ? full_support_lattice(spec) : examined_closure(spec, {init});
  LChain chain = almost_sure_iteration(spec, examined);
  PositivePartition partition = sure_safety_fixpoint(spec, examined);
  write_output(out_path, write_classification_report(spec, chain, partition));
  return 0;
}

int cmd_synthesize(const std::string& game_path, int player_num, const std::string& kind,
                   const std::string& init_arg, const std::string& out_path) {
  GameSpec spec = load_game(game_path);
  const Player player = player_num == 1 ? Player::kOne : Player::kTwo;
  Support init = init_arg.empty() ? initial_distribution(spec).support()
                                  : parse_support_names(spec, init_arg);
  FiniteMemoryStrategy strategy;
  if (kind == "random") {
    strategy = uniform_random_strategy(spec, player);
  } else if (kind == "sure") {
    if (player != Player::kTwo)
      throw std::invalid_argument("sure-safety strategies belong to player 2");
    SupportFamily closure = reachable_beliefs(spec, Player::kTwo, init, false);
    PositivePartition part = sure_safety_fixpoint(spec, closure);
    if (init.intersects(spec.target) || !part.sure_p2.contains(init))
      throw std::invalid_argument("initial support is not surely winning (classified " +
                                  std::string(to_string(classify_positive(spec, init))) +
                                  ")");
    strategy = synthesize_sure_p2(spec, part);
  } else if (kind == "as") {
    if (player != Player::kOne)
      throw std::invalid_argument("almost-sure strategies belong to player 1");
    LChain chain = almost_sure_iteration(spec, examined_closure(spec, {init}));
    strategy = synthesize_as_p1(spec, chain, init);
  } else if (kind == "positive") {
    if (player != Player::kTwo)
      throw std::invalid_argument("the switching strategy belongs to player 2");
    LChain chain = almost_sure_iteration(spec, examined_closure(spec, {init}));
    strategy = synthesize_positive_p2(spec, chain, init);
  } else {
    throw CLI::ValidationError("--kind must be random, sure, as or positive");
  }
  write_output(out_path, serialize_strategy(spec, strategy));
  return 0;
}

int cmd_simulate(const std::string& game_path, const std::string& p1_arg,
                 const std::string& p2_arg, const std::string& init_arg,
                 uint64_t episodes, uint32_t horizon, uint64_t seed,
                 const std::string& certificate_path, bool check_beliefs) {
  GameSpec spec = load_game(game_path);
  FiniteMemoryStrategy sigma = load_strategy(p1_arg, spec, Player::kOne);
  FiniteMemoryStrategy tau = load_strategy(p2_arg, spec, Player::kTwo);
  Distribution delta = init_arg.empty() ? initial_distribution(spec)
                                        : parse_distribution_arg(spec, init_arg);
  SupportFamily certificate;
  SimOptions opt;
  opt.episodes = episodes;
  opt.horizon = horizon;
  opt.seed = seed;
  opt.check_invariants = check_beliefs;
  if (!certificate_path.empty()) {
    certificate = parse_family(read_file(certificate_path), spec);
    opt.certificate = &certificate;
  }
  SimulationReport report = estimate_reach(spec, sigma, tau, delta, opt);
  std::cout << write_simulation_report(spec.name, report);
  return 0;
}

int cmd_oracle_check(const std::string& game_path) {
  GameSpec spec = load_game(game_path);
  nlohmann::ordered_json out;
  out["game"] = spec.name;
  bool ok = true;

  // Least-fixpoint duality against the safety gfp over the full lattice.
  SupportFamily losing = losing_supports_least_fixpoint(spec);
  PositivePartition part = sure_safety_fixpoint(spec, full_safety_lattice(spec));
  bool duality = true;
  for (const Support& L : full_safety_lattice(spec).sorted_members())
    if (losing.contains(L) == part.sure_p2.contains(L)) duality = false;
  out["duality_ok"] = duality;
  ok = ok && duality;

  // Bounded positive-reach witnesses at horizon 2^|K|.
  const uint32_t horizon = 1u << spec.n_states();
  bool witness = true;
  for (const Support& L : full_support_lattice(spec).sorted_members()) {
    const bool pos = L.intersects(spec.target) || !part.sure_p2.contains(L);
    Rat r = bounded_minmax_reach(spec, Distribution::uniform(L), horizon);
    if ((r > Rat()) != pos) witness = false;
  }
  out["witness_ok"] = witness;
  ok = ok && witness;

  if (is_revealing(spec)) {
    auto classes = perfect_info_solver(spec);
    bool agree = true;
    for (uint32_t k = 0; k < spec.n_states(); ++k) {
      Support single(spec.n_states());
      single.set(k);
      if (classes[k] != classify_support(spec, single)) agree = false;
    }
    out["perfect_info"] = agree ? "agree" : "disagree";
    ok = ok && agree;
  } else {
    out["perfect_info"] = "not_applicable";
  }
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_gen(const std::string& profile_arg, uint64_t seed, const std::string& out_path) {
  GeneratorProfile profile =
      profile_arg.empty() ? GeneratorProfile{} : GeneratorProfile::parse(profile_arg);
  GameSpec spec = generate_random_game(profile, seed);
  write_output(out_path, serialize_game(spec));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and simulator for stochastic reachability games with signals"};
  app.require_subcommand(1);

  std::string game_path, init_arg, out_path, p1_arg = "random", p2_arg = "random";
  std::string certificate_path, profile_arg, kind = "random";
  bool full_lattice = false, check_beliefs = false;
  int player_num = 1;
  uint64_t episodes = 10000, seed = default_seed();
  uint32_t horizon = 200;

  auto* validate = app.add_subcommand("validate", "check a game description");
  validate->add_option("game", game_path, "game file")->required();

  auto* classify = app.add_subcommand("classify", "three-way classification of supports");
  classify->add_option("game", game_path, "game file")->required();
  classify->add_option("--init", init_arg, "initial support, e.g. s1,s2");
  classify->add_flag("--full-lattice", full_lattice, "examine every nonempty support");
  classify->add_option("-o,--output", out_path, "report destination (default stdout)");

  auto* synthesize = app.add_subcommand("synthesize", "write a winning strategy to a file");
  synthesize->add_option("game", game_path, "game file")->required();
  synthesize->add_option("--player", player_num, "1 or 2")->required()
      ->check(CLI::IsMember({1, 2}));
  synthesize->add_option("--kind", kind, "random | sure | as | positive")->required();
  synthesize->add_option("--init", init_arg, "initial support");
  synthesize->add_option("-o,--output", out_path, "strategy destination")->required();

  auto* simulate = app.add_subcommand("simulate", "estimate the reach probability");
  simulate->add_option("game", game_path, "game file")->required();
  simulate->add_option("--p1", p1_arg, "strategy file or 'random'");
  simulate->add_option("--p2", p2_arg, "strategy file or 'random'");
  simulate->add_option("--init", init_arg, "initial distribution, e.g. s:1/2,t:1/2");
  simulate->add_option("--episodes", episodes, "episode count");
  simulate->add_option("--horizon", horizon, "step bound per episode");
  simulate->add_option("--seed", seed, "stream seed (default from BELIEF_ARENA_SEED)");
  simulate->add_option("--certificate", certificate_path, "sure-safety family file");
  simulate->add_flag("--check-beliefs", check_beliefs, "count belief-invariant violations");

  auto* oracle = app.add_subcommand("oracle-check", "cross-check solvers against oracles");
  oracle->add_option("game", game_path, "game file")->required();

  auto* gen = app.add_subcommand("gen", "emit a random act-consistent game");
  gen->add_option("--profile", profile_arg, "k=3,t=1,i=2,j=2,c=2,d=2,out=2,den=4[,revealing=1]");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("-o,--output", out_path, "game destination (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help exits 0, usage errors exit 2
  }

  try {
    if (validate->parsed()) return cmd_validate(game_path);
    if (classify->parsed()) return cmd_classify(game_path, init_arg, full_lattice, out_path);
    if (synthesize->parsed())
      return cmd_synthesize(game_path, player_num, kind, init_arg, out_path);
    if (simulate->parsed())
      return cmd_simulate(game_path, p1_arg, p2_arg, init_arg, episodes, horizon, seed,
                          certificate_path, check_beliefs);
    if (oracle->parsed()) return cmd_oracle_check(game_path);
    if (gen->parsed()) return cmd_gen(profile_arg, seed, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}

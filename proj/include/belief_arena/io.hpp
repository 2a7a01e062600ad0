#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "belief_arena/almost_sure.hpp"
#include "belief_arena/arena.hpp"
#include "belief_arena/game.hpp"
#include "belief_arena/positive.hpp"
#include "belief_arena/strategy.hpp"

namespace belief_arena {

/// Parse failure with source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(uint32_t line, uint32_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  uint32_t line() const { return line_; }
  uint32_t column() const { return column_; }

 private:
  uint32_t line_, column_;
};

/// Parses the line-oriented game format. Expands `absorbing` sugar into
/// self-loops emitting the first declared signal per action, then validates;
/// refuses (throws) on validation errors unless `refuse_invalid` is cleared
/// (the validate subcommand reports instead of refusing).
GameSpec parse_game(const std::string& text, const std::string& name = "game",
                    bool refuse_invalid = true);

/// Canonical text for a game; probabilities rendered exactly as rationals.
/// parse(serialize(parse(t))) == parse(t).
std::string serialize_game(const GameSpec& spec);

/// Initial distribution declared by the game file, or uniform over all
/// states when the file declared none.
Distribution initial_distribution(const GameSpec& spec);

/// Support/distribution parsers for CLI arguments: "s,t" (uniform) or
/// "s:1/2,t:1/2".
Support parse_support_names(const GameSpec& spec, const std::string& csv);
Distribution parse_distribution_arg(const GameSpec& spec, const std::string& arg);

std::string serialize_strategy(const GameSpec& spec, const FiniteMemoryStrategy& strategy);
FiniteMemoryStrategy parse_strategy(const std::string& text, const GameSpec& spec);

std::string serialize_family(const GameSpec& spec, const SupportFamily& family);
SupportFamily parse_family(const std::string& text, const GameSpec& spec);

/// Classification report: JSON object with keys game, universe_size,
/// chain_length, classes, phi_fixpoint_size; byte-stable for fixed inputs.
std::string write_classification_report(const GameSpec& spec, const LChain& chain,
                                        const PositivePartition& partition);

std::string write_simulation_report(const std::string& game_name,
                                    const SimulationReport& report);

std::string write_validation_report(const std::string& game_name,
                                    const ValidationReport& report);

struct GeneratorProfile {
  uint32_t states = 3;
  uint32_t targets = 1;
  uint32_t actions1 = 2;
  uint32_t actions2 = 2;
  uint32_t signals1 = 2;
  uint32_t signals2 = 2;
  uint32_t max_outcomes = 2;
  uint32_t denominator = 4;
  bool revealing = false;

  /// Parses "k=3,t=1,i=2,j=2,c=2,d=2,out=2,den=4,revealing=0".
  static GeneratorProfile parse(const std::string& text);
};

/// Deterministic act-consistent random game; always passes validate_game.
GameSpec generate_random_game(const GeneratorProfile& profile, uint64_t seed);

}  // namespace belief_arena

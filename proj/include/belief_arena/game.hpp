#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "belief_arena/rational.hpp"
#include "belief_arena/support.hpp"

namespace belief_arena {

enum class Player : int { kOne = 1, kTwo = 2 };

inline Player opponent(Player p) { return p == Player::kOne ? Player::kTwo : Player::kOne; }

/// One entry of the transition kernel: signal pair, successor state, and the
/// probability both as a double (simulation) and as an exact rational
/// (oracle arithmetic).
struct Outcome {
  uint32_t c;  // player 1 signal
  uint32_t d;  // player 2 signal
  uint32_t l;  // successor state
  double p;
  Rat pr;
};

/// Two-player stochastic game with signals on both sides.
///
/// States, actions and signals are kept as index spaces with declared names.
/// The kernel maps every (state, action1, action2) triple to a finite
/// distribution over (signal1, signal2, successor). Signals encode the action
/// just played through the act maps. Immutable after construction by
/// convention; all operations on it are pure.
struct GameSpec {
  std::string name;

  std::vector<std::string> states;
  Support target;  // over states

  std::vector<std::string> actions1, actions2;
  std::vector<std::string> signals1, signals2;
  std::vector<uint32_t> act1;  // signal1 index -> action1 index
  std::vector<uint32_t> act2;  // signal2 index -> action2 index

  /// Flattened [k][i][j] -> outcome list.
  std::vector<std::vector<Outcome>> kernel;

  /// Optional declared initial distribution (exact weights per state index).
  std::vector<std::pair<uint32_t, Rat>> init;

  uint32_t n_states() const { return static_cast<uint32_t>(states.size()); }
  uint32_t n_actions(Player p) const {
    return static_cast<uint32_t>(p == Player::kOne ? actions1.size() : actions2.size());
  }
  uint32_t n_signals(Player p) const {
    return static_cast<uint32_t>(p == Player::kOne ? signals1.size() : signals2.size());
  }
  uint32_t action_of_signal(Player p, uint32_t sig) const {
    return p == Player::kOne ? act1.at(sig) : act2.at(sig);
  }
  const std::vector<std::string>& action_names(Player p) const {
    return p == Player::kOne ? actions1 : actions2;
  }
  const std::vector<std::string>& signal_names(Player p) const {
    return p == Player::kOne ? signals1 : signals2;
  }

  size_t kernel_index(uint32_t k, uint32_t i, uint32_t j) const {
    return (static_cast<size_t>(k) * actions1.size() + i) * actions2.size() + j;
  }
  const std::vector<Outcome>& outcomes(uint32_t k, uint32_t i, uint32_t j) const {
    return kernel[kernel_index(k, i, j)];
  }

  int state_index(const std::string& n) const { return index_of(states, n); }
  int action_index(Player p, const std::string& n) const { return index_of(action_names(p), n); }
  int signal_index(Player p, const std::string& n) const { return index_of(signal_names(p), n); }

  /// Builds a support from state names; throws on unknown names.
  Support support_of(const std::vector<std::string>& names) const;

  /// State names of a support, sorted lexicographically.
  std::vector<std::string> names_of(const Support& s) const;

 private:
  static int index_of(const std::vector<std::string>& v, const std::string& n) {
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] == n) return static_cast<int>(i);
    return -1;
  }
};

/// Initial distribution over states. Exact weights are carried alongside the
/// doubles so the oracle module can consume distributions without rounding.
struct Distribution {
  std::vector<double> w;    // size |K|
  std::vector<Rat> exact;   // size |K|

  static Distribution uniform(const Support& support);
  static Distribution point(uint32_t state, uint32_t n_states);
  static Distribution from_exact(std::vector<Rat> weights);

  Support support() const;
  void validate() const;  // throws on bad weights
};

enum class Severity { kError, kWarning };

struct ValidationIssue {
  Severity severity;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  void add(Severity sev, std::string location, std::string message) {
    if (sev == Severity::kError) ok = false;
    issues.push_back({sev, std::move(location), std::move(message)});
  }
};

/// Checks every GameSpec invariant and reports all violations:
/// per-(k,i,j) distributions sum to 1 within 1e-9 with nonnegative entries,
/// signal/action consistency, and act surjectivity onto both action sets.
ValidationReport validate_game(const GameSpec& spec);

/// Belief operator: states considered possible after observing `signal` from
/// some state of `support`. May return the empty support when the signal has
/// probability zero from every state of the support.
Support belief_update(const GameSpec& spec, Player player, const Support& support,
                      uint32_t signal);

/// Pessimistic variant: the belief of support\T. The returned set may still
/// contain target states (the next pessimistic step removes them first);
/// empty means the target was surely visited already or the signal is
/// impossible.
Support pessimistic_belief_update(const GameSpec& spec, Player player,
                                  const Support& support, uint32_t signal);

/// Smallest family containing `start` that is closed under the chosen update
/// over all signals, excluding the empty support. The pessimistic iteration
/// tracks target-stripped sets (beliefs conditioned on no visit through the
/// current step), so every family member avoids T.
SupportFamily reachable_beliefs(const GameSpec& spec, Player player, const Support& start,
                                bool pessimistic);

}  // namespace belief_arena

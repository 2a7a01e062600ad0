#include "belief_arena/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "belief_arena/positive.hpp"

namespace belief_arena {

namespace {

// Depth-bounded policy-tree evaluation. A vector holds, per non-target
// state, the exact reach probability of one pure depth-h observation
// strategy under uniform player-1 play. Backing up one step enumerates a
// player-2 action with one continuation vector per compatible signal;
// pointwise-dominated vectors are dropped (they can never attain the min on
// any belief). The minimum over surviving vectors equals the minimum over
// all pure observation-based strategies of the reach probability.
using ReachVector = std::vector<Rat>;  // indexed by state; target entries unused

/// Inserts into a pointwise-minimal antichain. Returns false when dominated.
bool antichain_insert(std::vector<ReachVector>& frontier, ReachVector candidate,
                      const std::vector<uint32_t>& safe_states) {
  for (const ReachVector& held : frontier) {
    bool dominates_candidate = true;
    for (uint32_t k : safe_states)
      if (held[k] > candidate[k]) {
        dominates_candidate = false;
        break;
      }
    if (dominates_candidate) return false;
  }
  std::erase_if(frontier, [&](const ReachVector& held) {
    for (uint32_t k : safe_states)
      if (candidate[k] > held[k]) return false;
    return true;
  });
  frontier.push_back(std::move(candidate));
  return true;
}

}  // namespace

SupportFamily losing_supports_least_fixpoint(const GameSpec& spec, const OracleGuard& guard) {
  const uint32_t outside = spec.n_states() - spec.target.count();
  if (outside > guard.max_states_outside_targets)
    throw std::invalid_argument(
        "losing_supports_least_fixpoint: " + std::to_string(outside) +
        " states outside the target set exceeds the guard of " +
        std::to_string(guard.max_states_outside_targets));

  const SupportFamily lattice = full_safety_lattice(spec);
  const Support safe_mask = Support::full(spec.n_states()).minus(spec.target);
  SupportFamily losing(spec.n_states(), safe_mask);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Support& L : lattice.sorted_members()) {
      if (losing.contains(L)) continue;
      bool all_actions_fail = true;
      for (uint32_t j = 0; j < spec.n_actions(Player::kTwo) && all_actions_fail; ++j) {
        bool exists_bad_signal = false;
        for (uint32_t d = 0; d < spec.n_signals(Player::kTwo); ++d) {
          if (spec.act2[d] != j) continue;
          Support next = belief_update(spec, Player::kTwo, L, d);
          if (next.empty()) continue;
          if (next.intersects(spec.target) || losing.contains(next)) {
            exists_bad_signal = true;
            break;
          }
        }
        if (!exists_bad_signal) all_actions_fail = false;
      }
      if (all_actions_fail) {
        losing.insert(L);
        changed = true;
      }
    }
  }
  return losing;
}

Rat bounded_minmax_reach(const GameSpec& spec, const Distribution& delta, uint32_t horizon,
                         const OracleGuard& guard) {
  if (spec.n_states() > guard.max_states ||
      spec.n_actions(Player::kOne) > guard.max_actions ||
      spec.n_actions(Player::kTwo) > guard.max_actions ||
      spec.n_signals(Player::kOne) > guard.max_signals ||
      spec.n_signals(Player::kTwo) > guard.max_signals || horizon > guard.max_horizon)
    throw std::invalid_argument("bounded_minmax_reach: instance exceeds the tiny-size guard");
  delta.validate();

  const Support safe_mask = Support::full(spec.n_states()).minus(spec.target);
  const std::vector<uint32_t> safe_states = safe_mask.members();
  const uint32_t nI = spec.n_actions(Player::kOne);
  const Rat p1_share = Rat::from_fraction(1, nI);

  // Signals grouped by the player-2 action they encode.
  std::vector<std::vector<uint32_t>> signals_of(spec.n_actions(Player::kTwo));
  for (uint32_t d = 0; d < spec.n_signals(Player::kTwo); ++d)
    signals_of[spec.act2[d]].push_back(d);

  std::vector<ReachVector> frontier{ReachVector(spec.n_states(), Rat())};
  uint64_t work = 0;
  for (uint32_t h = 0; h < horizon; ++h) {
    std::vector<ReachVector> next;
    for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j) {
      const auto& djs = signals_of[j];
      // Odometer over one continuation vector per compatible signal.
      std::vector<size_t> pick(djs.size(), 0);
      while (true) {
        if (++work > guard.max_nodes)
          throw std::runtime_error("bounded_minmax_reach: policy budget exceeded");
        ReachVector beta(spec.n_states(), Rat());
        for (uint32_t k : safe_states) {
          Rat acc;
          for (uint32_t i = 0; i < nI; ++i) {
            for (const Outcome& o : spec.outcomes(k, i, j)) {
              if (o.pr.is_zero()) continue;
              const Rat m = p1_share * o.pr;
              if (spec.target.test(o.l)) {
                acc = acc + m;
              } else {
                size_t slot = 0;
                while (djs[slot] != o.d) ++slot;
                acc = acc + m * frontier[pick[slot]][o.l];
              }
            }
          }
          beta[k] = std::move(acc);
        }
        antichain_insert(next, std::move(beta), safe_states);
        // Advance the odometer.
        size_t slot = 0;
        while (slot < pick.size() && ++pick[slot] == frontier.size()) {
          pick[slot] = 0;
          ++slot;
        }
        if (slot == pick.size()) break;
      }
    }
    frontier = std::move(next);
    if (frontier.size() > 20000)
      throw std::runtime_error("bounded_minmax_reach: policy frontier exceeded the guard");
  }

  Rat initial_hit;
  for (uint32_t k : spec.target.members()) initial_hit = initial_hit + delta.exact[k];
  Rat best;
  bool have_best = false;
  for (const ReachVector& alpha : frontier) {
    Rat total = initial_hit;
    for (uint32_t k : safe_states)
      if (!delta.exact[k].is_zero()) total = total + delta.exact[k] * alpha[k];
    if (!have_best || total < best) {
      best = total;
      have_best = true;
    }
  }
  return best;
}

bool is_revealing(const GameSpec& spec) {
  // signal of player 1 -> (successor, action2) must be unique, and dually.
  std::vector<std::pair<bool, std::pair<uint32_t, uint32_t>>> seen1(
      spec.n_signals(Player::kOne), {false, {0, 0}});
  std::vector<std::pair<bool, std::pair<uint32_t, uint32_t>>> seen2(
      spec.n_signals(Player::kTwo), {false, {0, 0}});
  for (uint32_t k = 0; k < spec.n_states(); ++k) {
    for (uint32_t i = 0; i < spec.n_actions(Player::kOne); ++i) {
      for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j) {
        for (const Outcome& o : spec.outcomes(k, i, j)) {
          if (o.p <= 0.0) continue;
          auto& s1 = seen1[o.c];
          if (!s1.first) s1 = {true, {o.l, j}};
          else if (s1.second != std::make_pair(o.l, j)) return false;
          auto& s2 = seen2[o.d];
          if (!s2.first) s2 = {true, {o.l, i}};
          else if (s2.second != std::make_pair(o.l, i)) return false;
        }
      }
    }
  }
  return true;
}

std::vector<ThreeWayClass> perfect_info_solver(const GameSpec& spec) {
  if (!is_revealing(spec))
    throw std::invalid_argument("perfect_info_solver: signals are not state-and-action revealing");

  const uint32_t nK = spec.n_states();
  const uint32_t nI = spec.n_actions(Player::kOne);
  const uint32_t nJ = spec.n_actions(Player::kTwo);

  auto successors = [&](uint32_t k, uint32_t i, uint32_t j) {
    std::vector<uint32_t> out;
    for (const Outcome& o : spec.outcomes(k, i, j))
      if (o.p > 0.0) out.push_back(o.l);
    return out;
  };

  // Sure safety for P2: largest S in K\T with some j keeping all successors
  // in S whatever i.
  std::vector<bool> safe(nK);
  for (uint32_t k = 0; k < nK; ++k) safe[k] = !spec.target.test(k);
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t k = 0; k < nK; ++k) {
      if (!safe[k]) continue;
      bool has_j = false;
      for (uint32_t j = 0; j < nJ && !has_j; ++j) {
        bool ok = true;
        for (uint32_t i = 0; i < nI && ok; ++i)
          for (uint32_t l : successors(k, i, j))
            if (!safe[l]) {
              ok = false;
              break;
            }
        has_j = ok;
      }
      if (!has_j) {
        safe[k] = false;
        changed = true;
      }
    }
  }

  // Almost-sure reach region for P1: nu Y. mu X. (T or states with a support
  // set of P1 actions that surely stays in Y and positively progresses to X
  // whatever j plays).
  std::vector<bool> Y(nK, true);
  while (true) {
    std::vector<bool> X(nK, false);
    for (uint32_t k : spec.target.members()) X[k] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (uint32_t k = 0; k < nK; ++k) {
        if (X[k] || !Y[k] || spec.target.test(k)) continue;
        bool found = false;
        for (uint32_t mask = 1; mask < (1u << nI) && !found; ++mask) {
          bool stays = true;
          for (uint32_t i = 0; i < nI && stays; ++i) {
            if (!((mask >> i) & 1u)) continue;
            for (uint32_t j = 0; j < nJ && stays; ++j)
              for (uint32_t l : successors(k, i, j))
                if (!Y[l]) {
                  stays = false;
                  break;
                }
          }
          if (!stays) continue;
          bool progress = true;
          for (uint32_t j = 0; j < nJ && progress; ++j) {
            bool some = false;
            for (uint32_t i = 0; i < nI && !some; ++i) {
              if (!((mask >> i) & 1u)) continue;
              for (uint32_t l : successors(k, i, j))
                if (X[l]) {
                  some = true;
                  break;
                }
            }
            progress = some;
          }
          found = progress;
        }
        if (found) {
          X[k] = true;
          grew = true;
        }
      }
    }
    if (X == Y) break;
    Y = X;
  }

  std::vector<ThreeWayClass> out(nK);
  for (uint32_t k = 0; k < nK; ++k) {
    if (safe[k])
      out[k] = ThreeWayClass::kSureP2;
    else if (Y[k])
      out[k] = ThreeWayClass::kAlmostSureP1;
    else
      out[k] = ThreeWayClass::kPositiveBoth;
  }
  return out;
}

}  // namespace belief_arena

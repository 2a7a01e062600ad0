#include "belief_arena/game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace belief_arena {

Support GameSpec::support_of(const std::vector<std::string>& names) const {
  Support s(n_states());
  for (const std::string& n : names) {
    int idx = state_index(n);
    if (idx < 0) throw std::invalid_argument("unknown state: " + n);
    s.set(static_cast<uint32_t>(idx));
  }
  return s;
}

std::vector<std::string> GameSpec::names_of(const Support& s) const {
  std::vector<std::string> out;
  for (uint32_t k : s.members()) out.push_back(states[k]);
  std::sort(out.begin(), out.end());
  return out;
}

Distribution Distribution::uniform(const Support& support) {
  if (support.empty()) throw std::invalid_argument("Distribution::uniform: empty support");
  Distribution d;
  d.w.assign(support.universe(), 0.0);
  d.exact.assign(support.universe(), Rat());
  const auto members = support.members();
  const Rat share = Rat::from_fraction(1, static_cast<int64_t>(members.size()));
  for (uint32_t k : members) {
    d.w[k] = 1.0 / static_cast<double>(members.size());
    d.exact[k] = share;
  }
  return d;
}

Distribution Distribution::point(uint32_t state, uint32_t n_states) {
  Distribution d;
  d.w.assign(n_states, 0.0);
  d.exact.assign(n_states, Rat());
  d.w.at(state) = 1.0;
  d.exact[state] = Rat(1);
  return d;
}

Distribution Distribution::from_exact(std::vector<Rat> weights) {
  Distribution d;
  d.exact = std::move(weights);
  d.w.resize(d.exact.size());
  for (size_t i = 0; i < d.exact.size(); ++i) d.w[i] = d.exact[i].to_double();
  d.validate();
  return d;
}

Support Distribution::support() const {
  Support s(static_cast<uint32_t>(w.size()));
  for (uint32_t k = 0; k < w.size(); ++k)
    if (w[k] > 0.0) s.set(k);
  return s;
}

void Distribution::validate() const {
  double sum = 0.0;
  bool any = false;
  for (double v : w) {
    if (v < 0.0) throw std::invalid_argument("Distribution: negative weight");
    if (v > 0.0) any = true;
    sum += v;
  }
  if (!any) throw std::invalid_argument("Distribution: empty support");
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("Distribution: weights sum to " + std::to_string(sum));
}

ValidationReport validate_game(const GameSpec& spec) {
  ValidationReport report;
  const uint32_t nI = spec.n_actions(Player::kOne);
  const uint32_t nJ = spec.n_actions(Player::kTwo);

  for (uint32_t k = 0; k < spec.n_states(); ++k) {
    for (uint32_t i = 0; i < nI; ++i) {
      for (uint32_t j = 0; j < nJ; ++j) {
        const std::string loc = "(" + spec.states[k] + "," + spec.actions1[i] + "," +
                                spec.actions2[j] + ")";
        const auto& outs = spec.outcomes(k, i, j);
        if (outs.empty()) {
          report.add(Severity::kError, loc, "no transition distribution");
          continue;
        }
        double sum = 0.0;
        for (const Outcome& o : outs) {
          if (o.p < 0.0)
            report.add(Severity::kError, loc, "negative probability");
          sum += o.p;
          if (o.p > 0.0) {
            if (spec.act1[o.c] != i)
              report.add(Severity::kError, loc,
                         "signal/action mismatch: signal " + spec.signals1[o.c] +
                             " encodes action " + spec.actions1[spec.act1[o.c]]);
            if (spec.act2[o.d] != j)
              report.add(Severity::kError, loc,
                         "signal/action mismatch: signal " + spec.signals2[o.d] +
                             " encodes action " + spec.actions2[spec.act2[o.d]]);
          }
        }
        if (std::abs(sum - 1.0) > 1e-9)
          report.add(Severity::kError, loc,
                     "distribution sums to " + std::to_string(sum));
      }
    }
  }

  for (uint32_t i = 0; i < nI; ++i) {
    if (std::find(spec.act1.begin(), spec.act1.end(), i) == spec.act1.end())
      report.add(Severity::kError, "actions1",
                 "no signal encodes action " + spec.actions1[i]);
  }
  for (uint32_t j = 0; j < nJ; ++j) {
    if (std::find(spec.act2.begin(), spec.act2.end(), j) == spec.act2.end())
      report.add(Severity::kError, "actions2",
                 "no signal encodes action " + spec.actions2[j]);
  }
  return report;
}

Support belief_update(const GameSpec& spec, Player player, const Support& support,
                      uint32_t signal) {
  if (signal >= spec.n_signals(player))
    throw std::invalid_argument("belief_update: unknown signal index");
  Support next(spec.n_states());
  if (player == Player::kOne) {
    const uint32_t i = spec.act1[signal];
    support.for_each([&](uint32_t k) {
      for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j)
        for (const Outcome& o : spec.outcomes(k, i, j))
          if (o.c == signal && o.p > 0.0) next.set(o.l);
    });
  } else {
    const uint32_t j = spec.act2[signal];
    support.for_each([&](uint32_t k) {
      for (uint32_t i = 0; i < spec.n_actions(Player::kOne); ++i)
        for (const Outcome& o : spec.outcomes(k, i, j))
          if (o.d == signal && o.p > 0.0) next.set(o.l);
    });
  }
  return next;
}

Support pessimistic_belief_update(const GameSpec& spec, Player player,
                                  const Support& support, uint32_t signal) {
  return belief_update(spec, player, support.minus(spec.target), signal);
}

SupportFamily reachable_beliefs(const GameSpec& spec, Player player, const Support& start,
                                bool pessimistic) {
  if (start.empty()) throw std::invalid_argument("reachable_beliefs: empty start");
  const Support mask =
      pessimistic ? Support::full(spec.n_states()).minus(spec.target)
                  : Support::full(spec.n_states());
  SupportFamily family(spec.n_states(), mask);
  std::deque<Support> frontier;
  Support seed = pessimistic ? start.minus(spec.target) : start;
  if (seed.empty()) return family;
  family.insert(seed);
  frontier.push_back(seed);
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    for (uint32_t s = 0; s < spec.n_signals(player); ++s) {
      Support next = belief_update(spec, player, cur, s);
      if (pessimistic) next = next.minus(spec.target);
      if (next.empty()) continue;
      if (family.insert(next)) frontier.push_back(next);
    }
  }
  return family;
}

}  // namespace belief_arena

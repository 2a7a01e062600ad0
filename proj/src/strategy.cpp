#include "belief_arena/strategy.hpp"

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

void check_dist(const std::vector<std::pair<double, uint32_t>>& dist, uint32_t bound,
                const std::string& what) {
  if (dist.empty()) throw std::invalid_argument(what + ": empty distribution");
  double sum = 0.0;
  for (const auto& [p, v] : dist) {
    if (p < 0.0) throw std::invalid_argument(what + ": negative probability");
    if (v >= bound) throw std::invalid_argument(what + ": index out of range");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(what + ": probabilities sum to " + std::to_string(sum));
}

}  // namespace

void FiniteMemoryStrategy::validate(const GameSpec& spec) const {
  const uint32_t n_sig = spec.n_signals(player);
  const uint32_t n_act = spec.n_actions(player);
  if (memory.empty()) throw std::invalid_argument("strategy: no memory states");
  if (update.size() != memory.size() || output.size() != memory.size())
    throw std::invalid_argument("strategy: table sizes disagree with memory");
  for (size_t m = 0; m < memory.size(); ++m) {
    if (update[m].size() != n_sig)
      throw std::invalid_argument("strategy: update row has wrong signal count");
    for (uint32_t s = 0; s < n_sig; ++s)
      check_dist(update[m][s], n_memory(), "update(" + std::to_string(m) + ")");
    check_dist(output[m], n_act, "output(" + std::to_string(m) + ")");
  }
  for (const auto& [sup, m] : init_table)
    if (m >= n_memory()) throw std::invalid_argument("strategy: init target out of range");
}

uint32_t init_strategy(const FiniteMemoryStrategy& strategy, const Support& support) {
  auto it = strategy.init_table.find(support);
  if (it != strategy.init_table.end()) return it->second;
  if (strategy.init_rule == FiniteMemoryStrategy::InitRule::kAnySupport) return 0;
  if (strategy.init_rule != FiniteMemoryStrategy::InitRule::kTableOnly) {
    const bool pessim =
        strategy.init_rule == FiniteMemoryStrategy::InitRule::kPessimisticBeliefLookup;
    Support effective = support;
    if (pessim && strategy.target_mask.universe() == support.universe())
      effective = support.minus(strategy.target_mask);
    for (uint32_t m = 0; m < strategy.n_memory(); ++m) {
      const MemoryLabel& lab = strategy.memory[m];
      if (pessim && lab.kind == MemoryLabel::Kind::kPessimisticBelief &&
          lab.support == effective)
        return m;
      if (!pessim && lab.kind == MemoryLabel::Kind::kBelief && lab.support == support)
        return m;
    }
  }
  throw std::invalid_argument("strategy has no initialization for support {" +
                              [&] {
                                std::string s;
                                for (uint32_t k : support.members())
                                  s += (s.empty() ? "" : ",") + std::to_string(k);
                                return s;
                              }() + "}");
}

uint32_t sample_from(const std::vector<std::pair<double, uint32_t>>& dist, double unit_draw) {
  double acc = 0.0;
  uint32_t last = dist.empty() ? 0 : dist.back().second;
  for (const auto& [p, v] : dist) {
    if (p <= 0.0) continue;
    acc += p;
    last = v;
    if (unit_draw < acc) return v;
  }
  return last;  // floating point slack at the top of the scale
}

uint32_t step_strategy(const FiniteMemoryStrategy& strategy, uint32_t memory,
                       uint32_t signal, double unit_draw) {
  if (memory >= strategy.n_memory())
    throw std::invalid_argument("step_strategy: memory out of range");
  if (signal >= strategy.update[memory].size())
    throw std::invalid_argument("step_strategy: unknown signal");
  return sample_from(strategy.update[memory][signal], unit_draw);
}

const ActionDist& action_distribution(const FiniteMemoryStrategy& strategy, uint32_t memory) {
  return strategy.output.at(memory);
}

FiniteMemoryStrategy uniform_random_strategy(const GameSpec& spec, Player player) {
  FiniteMemoryStrategy s;
  s.player = player;
  s.kind = "uniform_random";
  MemoryLabel lab;
  lab.kind = MemoryLabel::Kind::kSink;
  lab.text = "uniform";
  s.memory.push_back(lab);
  const uint32_t n_act = spec.n_actions(player);
  ActionDist out;
  for (uint32_t a = 0; a < n_act; ++a)
    out.push_back({1.0 / static_cast<double>(n_act), a});
  s.output.push_back(out);
  s.update.push_back(std::vector<MemoryDist>(spec.n_signals(player), MemoryDist{{1.0, 0}}));
  s.init_rule = FiniteMemoryStrategy::InitRule::kAnySupport;
  return s;
}

FiniteMemoryStrategy random_finite_memory_strategy(const GameSpec& spec, Player player,
                                                   uint32_t max_memory, uint64_t seed) {
  uint64_t state = splitmix64(seed ^ 0xADE5A51Dull);
  auto next = [&] {
    state = splitmix64(state);
    return state;
  };
  const uint32_t n_mem = 1 + static_cast<uint32_t>(next() % std::max(1u, max_memory));
  const uint32_t n_act = spec.n_actions(player);
  const uint32_t n_sig = spec.n_signals(player);

  FiniteMemoryStrategy s;
  s.player = player;
  s.kind = "random_adversary";
  for (uint32_t m = 0; m < n_mem; ++m) {
    MemoryLabel lab;
    lab.kind = MemoryLabel::Kind::kPlain;
    lab.text = "rnd" + std::to_string(m);
    s.memory.push_back(lab);
  }
  auto random_dist = [&](uint32_t bound) {
    std::vector<std::pair<double, uint32_t>> dist;
    std::vector<double> raw(bound);
    double sum = 0.0;
    for (uint32_t v = 0; v < bound; ++v) {
      raw[v] = 1.0 + static_cast<double>(next() % 1000);
      sum += raw[v];
    }
    for (uint32_t v = 0; v < bound; ++v) dist.push_back({raw[v] / sum, v});
    // Renormalize exactly against accumulated rounding.
    double total = 0.0;
    for (auto& e : dist) total += e.first;
    dist.back().first += 1.0 - total;
    return dist;
  };
  for (uint32_t m = 0; m < n_mem; ++m) {
    s.output.push_back(random_dist(n_act));
    std::vector<MemoryDist> row;
    for (uint32_t sig = 0; sig < n_sig; ++sig) row.push_back(random_dist(n_mem));
    s.update.push_back(std::move(row));
  }
  s.init_rule = FiniteMemoryStrategy::InitRule::kAnySupport;
  return s;
}

bool strategies_equal(const FiniteMemoryStrategy& a, const FiniteMemoryStrategy& b,
                      double prob_tolerance) {
  if (a.player != b.player || a.n_memory() != b.n_memory()) return false;
  for (uint32_t m = 0; m < a.n_memory(); ++m)
    if (a.memory[m].text != b.memory[m].text) return false;
  if (a.init_table.size() != b.init_table.size()) return false;
  for (auto ita = a.init_table.begin(), itb = b.init_table.begin();
       ita != a.init_table.end(); ++ita, ++itb)
    if (ita->first != itb->first || ita->second != itb->second) return false;
  auto dists_equal = [&](const std::vector<std::pair<double, uint32_t>>& x,
                         const std::vector<std::pair<double, uint32_t>>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].second != y[i].second || std::abs(x[i].first - y[i].first) > prob_tolerance)
        return false;
    return true;
  };
  for (uint32_t m = 0; m < a.n_memory(); ++m) {
    if (!dists_equal(a.output[m], b.output[m])) return false;
    if (a.update[m].size() != b.update[m].size()) return false;
    for (size_t sig = 0; sig < a.update[m].size(); ++sig)
      if (!dists_equal(a.update[m][sig], b.update[m][sig])) return false;
  }
  return true;
}

}  // namespace belief_arena

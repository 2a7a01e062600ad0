#include "belief_arena/almost_sure.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace belief_arena {

namespace {

Support clip(const GameSpec& spec, const Support& s) { return s.minus(spec.target); }

std::string support_text(const GameSpec& spec, const Support& s) {
  std::string t;
  for (const std::string& n : spec.names_of(s)) t += (t.empty() ? "" : ",") + n;
  return "{" + t + "}";
}

uint32_t first_signal_of(const std::vector<uint32_t>& act, uint32_t action) {
  for (uint32_t s = 0; s < act.size(); ++s)
    if (act[s] == action) return s;
  throw std::logic_error("no signal encodes an action that validated as covered");
}

/// Candidate pessimistic beliefs for an L-game: the target-stripped closure
/// of examined supports, with family members treated as absorbing.
std::set<Support> candidate_beliefs(const GameSpec& spec, const SupportFamily& family,
                                    const SupportFamily& examined) {
  std::set<Support> all;
  std::deque<Support> frontier;
  for (const Support& L : examined.sorted_members()) {
    if (family.contains(L)) continue;
    Support seed = clip(spec, L);
    if (seed.empty() || family.contains(seed)) continue;
    if (all.insert(seed).second) frontier.push_back(seed);
  }
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    for (uint32_t c = 0; c < spec.n_signals(Player::kOne); ++c) {
      Support next = clip(spec, belief_update(spec, Player::kOne, cur, c));
      if (next.empty() || family.contains(next)) continue;
      if (all.insert(next).second) frontier.push_back(next);
    }
  }
  return all;
}

std::vector<uint32_t> compute_allowed(const GameSpec& spec, const Support& belief,
                                      const std::set<Support>& candidates) {
  std::vector<uint32_t> allowed;
  for (uint32_t i = 0; i < spec.n_actions(Player::kOne); ++i) {
    bool ok = true;
    for (uint32_t c = 0; c < spec.n_signals(Player::kOne) && ok; ++c) {
      if (spec.act1[c] != i) continue;
      Support raw = belief_update(spec, Player::kOne, belief, c);
      if (raw.empty()) continue;  // impossible observation
      Support next = clip(spec, raw);
      if (next.empty()) continue;  // surely at the target: won
      if (!candidates.count(next)) ok = false;
    }
    if (ok) allowed.push_back(i);
  }
  return allowed;
}

/// Product over the surviving candidates with P1 collapsed to a single
/// "uniform over allowed" action. Target entries collapse to one WON state.
struct AveragedProduct {
  GameSpec game;
  std::vector<std::pair<uint32_t, Support>> state_info;
  std::map<std::pair<uint32_t, Support>, uint32_t> index_of;
  uint32_t won_state = 0;
};

AveragedProduct build_averaged_product(
    const GameSpec& spec, const std::set<Support>& candidates,
    const std::map<Support, std::vector<uint32_t>>& allowed) {
  AveragedProduct prod;
  for (const Support& B : candidates)
    for (uint32_t k : B.members()) prod.state_info.push_back({k, B});
  std::sort(prod.state_info.begin(), prod.state_info.end());
  prod.won_state = static_cast<uint32_t>(prod.state_info.size());
  prod.state_info.push_back({0, Support(spec.n_states())});  // WON marker

  GameSpec& g = prod.game;
  g.name = spec.name + "#lgame";
  for (uint32_t ps = 0; ps < prod.state_info.size(); ++ps) {
    if (ps == prod.won_state) {
      g.states.push_back("(won)");
    } else {
      const auto& [k, B] = prod.state_info[ps];
      g.states.push_back(spec.states[k] + "|" + support_text(spec, B));
      prod.index_of[{k, B}] = ps;
    }
  }
  g.target = Support(g.n_states());
  g.target.set(prod.won_state);
  g.actions1 = {"u"};
  g.actions2 = spec.actions2;
  g.signals1 = spec.signals1;
  g.signals2 = spec.signals2;
  g.act1.assign(spec.signals1.size(), 0);
  g.act2 = spec.act2;

  const uint32_t nJ = spec.n_actions(Player::kTwo);
  g.kernel.resize(static_cast<size_t>(g.n_states()) * 1 * nJ);
  for (uint32_t ps = 0; ps < g.n_states(); ++ps) {
    for (uint32_t j = 0; j < nJ; ++j) {
      std::vector<Outcome>& outs = g.kernel[g.kernel_index(ps, 0, j)];
      if (ps == prod.won_state) {
        outs.push_back({0, first_signal_of(spec.act2, j), ps, 1.0, Rat(1)});
        continue;
      }
      const auto& [k, B] = prod.state_info[ps];
      const auto& acts = allowed.at(B);
      const Rat share = Rat::from_fraction(1, static_cast<int64_t>(acts.size()));
      std::map<std::tuple<uint32_t, uint32_t, uint32_t>, std::pair<double, Rat>> merged;
      for (uint32_t i : acts) {
        for (const Outcome& o : spec.outcomes(k, i, j)) {
          if (o.p <= 0.0) continue;
          uint32_t dest;
          if (spec.target.test(o.l)) {
            dest = prod.won_state;
          } else {
            Support next = clip(spec, belief_update(spec, Player::kOne, B, o.c));
            auto it = prod.index_of.find({o.l, next});
            if (it == prod.index_of.end())
              throw std::logic_error("averaged product: allowed action escapes candidates");
            dest = it->second;
          }
          auto& slot = merged[{o.c, o.d, dest}];
          slot.first += o.p / static_cast<double>(acts.size());
          slot.second = slot.second + o.pr * share;
        }
      }
      for (const auto& [key, w] : merged)
        outs.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), w.first,
                        w.second});
    }
  }
  return prod;
}

/// Union of the P2 belief closures of every singleton position support.
SupportFamily product_belief_closure(const AveragedProduct& prod,
                                     const std::set<Support>& candidates) {
  SupportFamily family(prod.game.n_states());
  std::deque<Support> frontier;
  for (const Support& B : candidates) {
    for (uint32_t k : B.members()) {
      Support single(prod.game.n_states());
      single.set(prod.index_of.at({k, B}));
      if (family.insert(single)) frontier.push_back(single);
    }
  }
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    for (uint32_t d = 0; d < prod.game.n_signals(Player::kTwo); ++d) {
      Support next = belief_update(prod.game, Player::kTwo, cur, d);
      if (next.empty()) continue;
      if (family.insert(next)) frontier.push_back(next);
    }
  }
  return family;
}

/// Freezes one automaton per removed belief, entered at each certified
/// position.
CertificateAutomaton freeze_certificate(const AveragedProduct& prod,
                                        const PositivePartition& part,
                                        const std::vector<std::pair<uint32_t, Support>>&
                                            certified_positions) {
  CertificateAutomaton automaton;
  std::map<Support, uint32_t> index;
  std::deque<Support> frontier;
  auto intern = [&](const Support& s) {
    auto it = index.find(s);
    if (it == index.end()) {
      it = index.emplace(s, static_cast<uint32_t>(automaton.nodes.size())).first;
      automaton.nodes.emplace_back();
      frontier.push_back(s);
    }
    return it->second;
  };
  for (const auto& [k, single] : certified_positions)
    automaton.entries[k] = intern(single);
  const uint32_t n_sig = prod.game.n_signals(Player::kTwo);
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    const uint32_t idx = index.at(cur);
    std::string label = "cert";
    for (uint32_t ps : cur.members()) label += " " + prod.game.states[ps];
    automaton.nodes[idx].label = label;
    automaton.nodes[idx].action = part.action_choice.at(cur);
    automaton.nodes[idx].next.assign(n_sig, -1);
    for (uint32_t d = 0; d < n_sig; ++d) {
      if (prod.game.act2[d] != automaton.nodes[idx].action) continue;
      Support next = belief_update(prod.game, Player::kTwo, cur, d);
      if (next.empty() || !part.sure_p2.contains(next)) continue;
      const uint32_t dest = intern(next);
      automaton.nodes[idx].next[d] = static_cast<int32_t>(dest);
    }
  }
  return automaton;
}

void assert_examined_closed(const GameSpec& spec, const SupportFamily& examined) {
  for (const Support& L : examined.sorted_members()) {
    for (uint32_t c = 0; c < spec.n_signals(Player::kOne); ++c) {
      Support next = clip(spec, pessimistic_belief_update(spec, Player::kOne, L, c));
      if (!next.empty() && !examined.contains(next))
        throw std::invalid_argument(
            "examined universe is not closed under the pessimistic P1 update");
    }
    for (uint32_t d = 0; d < spec.n_signals(Player::kTwo); ++d) {
      Support next = belief_update(spec, Player::kTwo, L, d);
      if (!next.empty() && !examined.contains(next))
        throw std::invalid_argument("examined universe is not closed under the P2 update");
    }
  }
}

}  // namespace

const char* to_string(ThreeWayClass c) {
  switch (c) {
    case ThreeWayClass::kAlmostSureP1: return "almost_sure_p1";
    case ThreeWayClass::kSureP2: return "sure_p2";
    case ThreeWayClass::kPositiveBoth: return "positive_both";
  }
  return "?";
}

ProductGame build_product_game(const GameSpec& spec, const SupportFamily& bad_family,
                               const std::vector<Support>& initial_supports) {
  for (const Support& b : bad_family.sorted_members())
    if (b.intersects(spec.target))
      throw std::invalid_argument("build_product_game: bad family member intersects T");

  std::set<Support> components;
  std::deque<Support> frontier;
  for (const Support& L : initial_supports) {
    Support seed = clip(spec, L);
    if (seed.empty()) continue;
    if (components.insert(seed).second) frontier.push_back(seed);
  }
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    if (bad_family.contains(cur)) continue;  // absorbing-bad: no expansion
    for (uint32_t c = 0; c < spec.n_signals(Player::kOne); ++c) {
      Support next = clip(spec, belief_update(spec, Player::kOne, cur, c));
      if (next.empty()) continue;
      if (components.insert(next).second) frontier.push_back(next);
    }
  }

  std::set<uint32_t> targets;
  for (const Support& L : initial_supports)
    for (uint32_t k : L.intersect(spec.target).members()) targets.insert(k);
  for (const Support& B : components) {
    if (bad_family.contains(B)) continue;
    for (uint32_t k : B.members())
      for (uint32_t i = 0; i < spec.n_actions(Player::kOne); ++i)
        for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j)
          for (const Outcome& o : spec.outcomes(k, i, j))
            if (o.p > 0.0 && spec.target.test(o.l)) targets.insert(o.l);
  }

  ProductGame prod;
  for (uint32_t t : targets) prod.state_info.push_back({t, Support(spec.n_states())});
  for (const Support& B : components)
    for (uint32_t k : B.members()) prod.state_info.push_back({k, B});
  std::sort(prod.state_info.begin(), prod.state_info.end());

  GameSpec& g = prod.game;
  g.name = spec.name + "#product";
  prod.absorbing_bad.assign(prod.state_info.size(), false);
  prod.is_target.assign(prod.state_info.size(), false);
  for (uint32_t ps = 0; ps < prod.state_info.size(); ++ps) {
    const auto& [k, B] = prod.state_info[ps];
    prod.index_of[{k, B}] = ps;
    if (B.empty()) {
      prod.is_target[ps] = true;
      g.states.push_back(spec.states[k] + "|*");
    } else {
      if (bad_family.contains(B)) prod.absorbing_bad[ps] = true;
      g.states.push_back(spec.states[k] + "|" + support_text(spec, B));
    }
  }
  g.target = Support(g.n_states());
  for (uint32_t ps = 0; ps < g.n_states(); ++ps)
    if (prod.is_target[ps]) g.target.set(ps);
  g.actions1 = spec.actions1;
  g.actions2 = spec.actions2;
  g.signals1 = spec.signals1;
  g.signals2 = spec.signals2;
  g.act1 = spec.act1;
  g.act2 = spec.act2;

  const uint32_t nI = spec.n_actions(Player::kOne);
  const uint32_t nJ = spec.n_actions(Player::kTwo);
  g.kernel.resize(static_cast<size_t>(g.n_states()) * nI * nJ);
  for (uint32_t ps = 0; ps < g.n_states(); ++ps) {
    const auto& [k, B] = prod.state_info[ps];
    for (uint32_t i = 0; i < nI; ++i) {
      for (uint32_t j = 0; j < nJ; ++j) {
        std::vector<Outcome>& outs = g.kernel[g.kernel_index(ps, i, j)];
        if (prod.is_target[ps] || prod.absorbing_bad[ps]) {
          outs.push_back({first_signal_of(spec.act1, i), first_signal_of(spec.act2, j), ps,
                          1.0, Rat(1)});
          continue;
        }
        for (const Outcome& o : spec.outcomes(k, i, j)) {
          if (o.p <= 0.0) continue;
          uint32_t dest;
          if (spec.target.test(o.l)) {
            dest = prod.index_of.at({o.l, Support(spec.n_states())});
          } else {
            Support next = clip(spec, belief_update(spec, Player::kOne, B, o.c));
            auto it = prod.index_of.find({o.l, next});
            if (it == prod.index_of.end())
              throw std::logic_error("product: successor belief not registered");
            dest = it->second;
          }
          outs.push_back({o.c, o.d, dest, o.p, o.pr});
        }
      }
    }
  }
  return prod;
}

LGameResult solve_l_game(const GameSpec& spec, const SupportFamily& family,
                         const SupportFamily& examined) {
  const auto exam_members = examined.sorted_members();
  if (!family.upward_closed_within(exam_members))
    throw std::invalid_argument("solve_l_game: family is not upward-closed within examined");

  LGameResult result;
  result.game_name = spec.name;
  result.as_p1 = SupportFamily(spec.n_states());
  result.pos_p2 = SupportFamily(spec.n_states());
  result.p2_certificate.game_name = spec.name;

  std::set<Support> candidates = candidate_beliefs(spec, family, examined);
  std::map<Support, std::vector<uint32_t>> allowed;
  bool first_partition_stored = false;

  while (true) {
    bool changed = false;

    // Allowed-action pruning to exhaustion.
    while (true) {
      allowed.clear();
      std::vector<Support> drop;
      for (const Support& B : candidates) {
        auto acts = compute_allowed(spec, B, candidates);
        if (acts.empty())
          drop.push_back(B);
        else
          allowed[B] = std::move(acts);
      }
      if (drop.empty()) break;
      for (const Support& B : drop) candidates.erase(B);
      changed = true;
    }
    if (candidates.empty()) break;

    // Certificate removal on the restricted product: a belief falls as soon
    // as any of its positions (k,B) is surely safe for P2 as a singleton
    // support (P2 can guess that exact position and hold it forever).
    AveragedProduct prod = build_averaged_product(spec, candidates, allowed);
    SupportFamily closure = product_belief_closure(prod, candidates);
    PositivePartition part = sure_safety_fixpoint(prod.game, closure);
    if (!first_partition_stored) {
      result.p2_certificate = part;
      first_partition_stored = true;
    }
    std::vector<Support> removed;
    for (const Support& B : candidates) {
      std::vector<std::pair<uint32_t, Support>> certified;
      for (uint32_t k : B.members()) {
        Support single(prod.game.n_states());
        single.set(prod.index_of.at({k, B}));
        if (part.sure_p2.contains(single)) certified.push_back({k, single});
      }
      if (!certified.empty()) {
        result.certificates.emplace(B, freeze_certificate(prod, part, certified));
        removed.push_back(B);
      }
    }
    for (const Support& B : removed) candidates.erase(B);
    if (!removed.empty()) changed = true;
    if (!changed) break;
  }

  for (const Support& L : exam_members) {
    if (family.contains(L)) {
      result.pos_p2.insert(L);
      continue;
    }
    Support stripped = clip(spec, L);
    if (stripped.empty() || candidates.count(stripped))
      result.as_p1.insert(L);
    else
      result.pos_p2.insert(L);
  }

  // Allowed actions restricted to beliefs reachable from as_p1 members under
  // allowed play.
  std::set<Support> reach;
  std::deque<Support> frontier;
  for (const Support& L : result.as_p1.sorted_members()) {
    Support seed = clip(spec, L);
    if (seed.empty()) continue;
    if (reach.insert(seed).second) frontier.push_back(seed);
  }
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    for (uint32_t i : allowed.at(cur)) {
      for (uint32_t c = 0; c < spec.n_signals(Player::kOne); ++c) {
        if (spec.act1[c] != i) continue;
        Support next = clip(spec, belief_update(spec, Player::kOne, cur, c));
        if (next.empty()) continue;
        if (reach.insert(next).second) frontier.push_back(next);
      }
    }
  }
  for (const Support& B : reach) result.allowed_actions[B] = allowed.at(B);
  return result;
}

SupportFamily examined_closure(const GameSpec& spec, const std::vector<Support>& inits) {
  SupportFamily family(spec.n_states());
  std::deque<Support> frontier;
  for (const Support& L : inits) {
    if (L.empty()) throw std::invalid_argument("examined_closure: empty initial support");
    if (family.insert(L)) frontier.push_back(L);
  }
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    for (uint32_t c = 0; c < spec.n_signals(Player::kOne); ++c) {
      Support next = clip(spec, pessimistic_belief_update(spec, Player::kOne, cur, c));
      if (!next.empty() && family.insert(next)) frontier.push_back(next);
    }
    for (uint32_t d = 0; d < spec.n_signals(Player::kTwo); ++d) {
      Support next = belief_update(spec, Player::kTwo, cur, d);
      if (!next.empty() && family.insert(next)) frontier.push_back(next);
    }
  }
  return family;
}

SupportFamily full_support_lattice(const GameSpec& spec) {
  if (spec.n_states() > 16)
    throw std::invalid_argument("full_support_lattice: state space too large");
  SupportFamily family(spec.n_states());
  const uint64_t total = 1ull << spec.n_states();
  for (uint64_t bits = 1; bits < total; ++bits) {
    Support L(spec.n_states());
    for (uint32_t k = 0; k < spec.n_states(); ++k)
      if ((bits >> k) & 1ull) L.set(k);
    family.insert(L);
  }
  return family;
}

LChain almost_sure_iteration(const GameSpec& spec, const SupportFamily& examined) {
  assert_examined_closed(spec, examined);
  const auto exam_members = examined.sorted_members();

  LChain chain;
  chain.game_name = spec.name;
  chain.examined = examined;
  chain.levels.push_back(SupportFamily(spec.n_states()));  // L_0 = {}

  while (true) {
    const SupportFamily& current = chain.levels.back();
    LGameResult res = solve_l_game(spec, current, examined);
    SupportFamily next = res.pos_p2;
    for (const Support& L : current.sorted_members())
      if (!next.contains(L))
        throw std::logic_error("chain is not monotone on " + spec.name);
    if (!next.upward_closed_within(exam_members))
      throw std::logic_error("chain level is not upward-closed on " + spec.name);
    chain.results.push_back(std::move(res));
    const bool stable = next == current;
    chain.levels.push_back(std::move(next));
    if (stable) break;
    if (chain.levels.size() > examined.size() + 2)
      throw std::logic_error("chain failed to stabilize on " + spec.name);
  }

  PositivePartition part = sure_safety_fixpoint(spec, examined);
  for (const Support& L : exam_members) {
    const bool sure_p2 =
        !L.intersects(spec.target) && part.sure_p2.contains(L);
    ThreeWayClass cls;
    if (sure_p2) {
      if (!chain.limit().contains(L))
        throw std::logic_error("sure-P2 support escaped the chain limit on " + spec.name);
      cls = ThreeWayClass::kSureP2;
    } else if (!chain.limit().contains(L)) {
      cls = ThreeWayClass::kAlmostSureP1;
    } else {
      cls = ThreeWayClass::kPositiveBoth;
    }
    chain.classes[L] = cls;
  }
  return chain;
}

ThreeWayClass classify_support(const GameSpec& spec, const Support& support) {
  if (support.empty()) throw std::invalid_argument("classify_support: empty support");
  SupportFamily examined = examined_closure(spec, {support});
  LChain chain = almost_sure_iteration(spec, examined);
  return chain.classes.at(support);
}

FiniteMemoryStrategy synthesize_as_p1(const GameSpec& spec, const LChain& chain,
                                      const Support& initial) {
  auto it = chain.classes.find(initial);
  if (it == chain.classes.end())
    throw std::invalid_argument("synthesize_as_p1: support was not examined");
  if (it->second != ThreeWayClass::kAlmostSureP1)
    throw std::invalid_argument(std::string("synthesize_as_p1: support is not "
                                            "almost-surely winning (classified ") +
                                to_string(it->second) + ")");

  const LGameResult& final_res = chain.results.back();
  FiniteMemoryStrategy s;
  s.player = Player::kOne;
  s.kind = "as_p1";
  s.init_rule = FiniteMemoryStrategy::InitRule::kPessimisticBeliefLookup;
  s.target_mask = spec.target;

  std::map<Support, uint32_t> index;
  for (const auto& [B, acts] : final_res.allowed_actions) {
    MemoryLabel lab;
    lab.kind = MemoryLabel::Kind::kPessimisticBelief;
    lab.support = B;
    lab.text = "pbelief " + support_text(spec, B);
    index[B] = s.n_memory();
    s.memory.push_back(lab);
  }
  MemoryLabel won;
  won.kind = MemoryLabel::Kind::kPessimisticBelief;
  won.support = Support(spec.n_states());
  won.text = "won";
  const uint32_t won_idx = s.n_memory();
  s.memory.push_back(won);

  const uint32_t n_sig = spec.n_signals(Player::kOne);
  for (const auto& [B, acts] : final_res.allowed_actions) {
    ActionDist out;
    for (uint32_t a : acts)
      out.push_back({1.0 / static_cast<double>(acts.size()), a});
    s.output.push_back(std::move(out));
    std::vector<MemoryDist> row(n_sig);
    const uint32_t self = index.at(B);
    for (uint32_t c = 0; c < n_sig; ++c) {
      const uint32_t act = spec.act1[c];
      if (std::find(acts.begin(), acts.end(), act) == acts.end()) {
        row[c] = MemoryDist{{1.0, self}};  // own-action encoding: never received
        continue;
      }
      Support raw = belief_update(spec, Player::kOne, B, c);
      if (raw.empty()) {
        row[c] = MemoryDist{{1.0, self}};  // impossible observation
        continue;
      }
      Support next = clip(spec, raw);
      if (next.empty())
        row[c] = MemoryDist{{1.0, won_idx}};
      else
        row[c] = MemoryDist{{1.0, index.at(next)}};
    }
    s.update.push_back(std::move(row));
  }
  s.output.push_back(ActionDist{{1.0, 0}});  // won: arbitrary fixed action
  s.update.push_back(std::vector<MemoryDist>(n_sig, MemoryDist{{1.0, won_idx}}));

  Support start = clip(spec, initial);
  s.init_table[initial] = start.empty() ? won_idx : index.at(start);
  return s;
}

FiniteMemoryStrategy synthesize_positive_p2(const GameSpec& spec, const LChain& chain,
                                            const Support& initial) {
  auto cit = chain.classes.find(initial);
  if (cit == chain.classes.end())
    throw std::invalid_argument("synthesize_positive_p2: support was not examined");
  if (!chain.limit().contains(initial))
    throw std::invalid_argument(std::string("synthesize_positive_p2: support is not "
                                            "positively winning for player 2 (classified ") +
                                to_string(cit->second) + ")");

  const size_t top = chain.distinct_levels() - 1;  // highest nonempty level index
  auto level_of = [&](const Support& L) -> size_t {
    for (size_t n = 1; n <= top; ++n)
      if (chain.levels[n].contains(L)) return n;
    throw std::logic_error("level_of: support not in any chain level");
  };

  FiniteMemoryStrategy s;
  s.player = Player::kTwo;
  s.kind = "positive_p2";
  s.init_rule = FiniteMemoryStrategy::InitRule::kTableOnly;

  const uint32_t n_sig = spec.n_signals(Player::kTwo);
  const uint32_t n_act = spec.n_actions(Player::kTwo);

  // Roaming states, one per level 1..top.
  std::vector<uint32_t> roam_idx(top + 1, 0);
  for (size_t n = 1; n <= top; ++n) {
    MemoryLabel lab;
    lab.kind = MemoryLabel::Kind::kRoam;
    lab.level = static_cast<int>(n);
    lab.text = "roam level " + std::to_string(n) +
               " (stay 1/3, descend 1/3, certify 1/3)";
    roam_idx[n] = s.n_memory();
    s.memory.push_back(lab);
  }
  MemoryLabel sink;
  sink.kind = MemoryLabel::Kind::kSink;
  sink.text = "sink";
  const uint32_t sink_idx = s.n_memory();
  s.memory.push_back(sink);

  // Certificate automaton states per (level, removed belief).
  // cert_entries[n][B] = memory indices of the automaton's entry nodes, one
  // per certified position.
  std::vector<std::map<Support, std::vector<uint32_t>>> cert_entries(top + 1);
  for (size_t n = 1; n <= top; ++n) {
    const LGameResult& res = chain.results[n - 1];
    for (const auto& [B, automaton] : res.certificates) {
      const uint32_t base = s.n_memory();
      for (const auto& [k, node] : automaton.entries)
        cert_entries[n][B].push_back(base + node);
      for (const auto& node : automaton.nodes) {
        MemoryLabel lab;
        lab.kind = MemoryLabel::Kind::kCertificate;
        lab.level = static_cast<int>(n);
        lab.text = "level " + std::to_string(n) + " " + node.label;
        s.memory.push_back(lab);
      }
      s.output.resize(s.memory.size());
      s.update.resize(s.memory.size());
      for (size_t ni = 0; ni < automaton.nodes.size(); ++ni) {
        const auto& node = automaton.nodes[ni];
        s.output[base + ni] = ActionDist{{1.0, node.action}};
        std::vector<MemoryDist> row(n_sig);
        for (uint32_t d = 0; d < n_sig; ++d) {
          int32_t nx = node.next[d];
          row[d] = MemoryDist{{1.0, nx < 0 ? sink_idx : base + static_cast<uint32_t>(nx)}};
        }
        s.update[base + ni] = std::move(row);
      }
    }
  }

  // Roaming and sink rows.
  s.output.resize(s.memory.size());
  s.update.resize(s.memory.size());
  ActionDist uniform_out;
  for (uint32_t a = 0; a < n_act; ++a)
    uniform_out.push_back({1.0 / static_cast<double>(n_act), a});
  for (size_t n = 1; n <= top; ++n) {
    std::map<uint32_t, double> move;  // memory -> probability
    double stay = 1.0 / 3.0;
    // Branch (ii): descend to the strategy of a uniformly picked support of
    // the previous level; skipped (folded into stay) when that level is empty.
    const auto prev_members = chain.levels[n - 1].sorted_members();
    if (prev_members.empty()) {
      stay += 1.0 / 3.0;
    } else {
      const double each = 1.0 / 3.0 / static_cast<double>(prev_members.size());
      for (const Support& L : prev_members) move[roam_idx[level_of(L)]] += each;
    }
    // Branch (iii): commit to the product certificate of a uniformly picked
    // support entering at this level, guessing one certified position
    // uniformly; picks without a frozen certificate fold into stay.
    std::vector<Support> fresh;
    for (const Support& L : chain.levels[n].sorted_members())
      if (!chain.levels[n - 1].contains(L)) fresh.push_back(L);
    if (fresh.empty()) {
      stay += 1.0 / 3.0;
    } else {
      const double each = 1.0 / 3.0 / static_cast<double>(fresh.size());
      for (const Support& L : fresh) {
        Support stripped = clip(spec, L);
        auto it = cert_entries[n].find(stripped);
        if (it != cert_entries[n].end()) {
          const double share = each / static_cast<double>(it->second.size());
          for (uint32_t entry : it->second) move[entry] += share;
        } else {
          stay += each;
        }
      }
    }
    move[roam_idx[n]] += stay;
    MemoryDist dist;
    for (const auto& [m, p] : move) dist.push_back({p, m});
    s.output[roam_idx[n]] = uniform_out;
    s.update[roam_idx[n]] = std::vector<MemoryDist>(n_sig, dist);
  }
  s.output[sink_idx] = uniform_out;
  s.update[sink_idx] = std::vector<MemoryDist>(n_sig, MemoryDist{{1.0, sink_idx}});

  // Initialization: every support of the chain limit enters the roaming phase
  // of its level; other examined supports fall back to the top level so the
  // strategy is total as a simulation adversary.
  for (const Support& L : chain.examined.sorted_members()) {
    if (chain.limit().contains(L))
      s.init_table[L] = roam_idx[level_of(L)];
    else
      s.init_table[L] = roam_idx[top];
  }
  return s;
}

FiniteMemoryStrategy total_pessimistic_adversary(const GameSpec& spec, const LChain& chain) {
  const LGameResult& final_res = chain.results.back();

  // All target-stripped beliefs reachable from examined supports under any
  // action, so the adversary is total on every simulation it joins.
  std::set<Support> beliefs;
  std::deque<Support> frontier;
  for (const Support& L : chain.examined.sorted_members()) {
    Support seed = clip(spec, L);
    if (seed.empty()) continue;
    if (beliefs.insert(seed).second) frontier.push_back(seed);
  }
  while (!frontier.empty()) {
    Support cur = frontier.front();
    frontier.pop_front();
    for (uint32_t c = 0; c < spec.n_signals(Player::kOne); ++c) {
      Support next = clip(spec, belief_update(spec, Player::kOne, cur, c));
      if (next.empty()) continue;
      if (beliefs.insert(next).second) frontier.push_back(next);
    }
  }

  FiniteMemoryStrategy s;
  s.player = Player::kOne;
  s.kind = "as_p1_total";
  s.init_rule = FiniteMemoryStrategy::InitRule::kPessimisticBeliefLookup;
  s.target_mask = spec.target;

  std::map<Support, uint32_t> index;
  for (const Support& B : beliefs) {
    MemoryLabel lab;
    lab.kind = MemoryLabel::Kind::kPessimisticBelief;
    lab.support = B;
    lab.text = "pbelief " + support_text(spec, B);
    index[B] = s.n_memory();
    s.memory.push_back(lab);
  }
  MemoryLabel won;
  won.kind = MemoryLabel::Kind::kPessimisticBelief;
  won.support = Support(spec.n_states());
  won.text = "won";
  const uint32_t won_idx = s.n_memory();
  s.memory.push_back(won);

  const uint32_t n_sig = spec.n_signals(Player::kOne);
  const uint32_t n_act = spec.n_actions(Player::kOne);
  for (const Support& B : beliefs) {
    auto it = final_res.allowed_actions.find(B);
    ActionDist out;
    if (it != final_res.allowed_actions.end()) {
      for (uint32_t a : it->second)
        out.push_back({1.0 / static_cast<double>(it->second.size()), a});
    } else {
      for (uint32_t a = 0; a < n_act; ++a)
        out.push_back({1.0 / static_cast<double>(n_act), a});
    }
    s.output.push_back(std::move(out));
    std::vector<MemoryDist> row(n_sig);
    for (uint32_t c = 0; c < n_sig; ++c) {
      Support raw = belief_update(spec, Player::kOne, B, c);
      if (raw.empty()) {
        row[c] = MemoryDist{{1.0, index.at(B)}};
        continue;
      }
      Support next = clip(spec, raw);
      row[c] = MemoryDist{{1.0, next.empty() ? won_idx : index.at(next)}};
    }
    s.update.push_back(std::move(row));
  }
  s.output.push_back(ActionDist{{1.0, 0}});
  s.update.push_back(std::vector<MemoryDist>(n_sig, MemoryDist{{1.0, won_idx}}));
  return s;
}

}  // namespace belief_arena

#include "belief_arena/positive.hpp"

#include <stdexcept>

namespace belief_arena {

SupportFamily phi_step(const GameSpec& spec, const SupportFamily& family) {
  SupportFamily kept(family.universe(), family.mask());
  for (const Support& L : family.sorted_members()) {
    if (L.intersects(spec.target))
      throw std::invalid_argument("phi_step: family member intersects the target set");
    bool has_action = false;
    for (uint32_t j = 0; j < spec.n_actions(Player::kTwo) && !has_action; ++j) {
      bool ok = true;
      for (uint32_t d = 0; d < spec.n_signals(Player::kTwo); ++d) {
        if (spec.act2[d] != j) continue;
        Support next = belief_update(spec, Player::kTwo, L, d);
        if (next.empty()) continue;  // impossible observation from L
        if (!family.contains(next)) {
          ok = false;
          break;
        }
      }
      has_action = ok;
    }
    if (has_action) kept.insert(L);
  }
  return kept;
}

PositivePartition sure_safety_fixpoint(const GameSpec& spec, const SupportFamily& universe) {
  const Support safe_mask = Support::full(spec.n_states()).minus(spec.target);
  SupportFamily family(universe.universe(), safe_mask);
  for (const Support& L : universe.sorted_members())
    if (!L.intersects(spec.target)) family.insert(L);

  while (true) {
    SupportFamily next = phi_step(spec, family);
    if (next == family) break;
    family = std::move(next);
  }

  PositivePartition part;
  part.game_name = spec.name;
  part.sure_p2 = family;
  part.universe = universe;
  for (const Support& L : family.sorted_members()) {
    for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j) {
      bool ok = true;
      for (uint32_t d = 0; d < spec.n_signals(Player::kTwo); ++d) {
        if (spec.act2[d] != j) continue;
        Support next = belief_update(spec, Player::kTwo, L, d);
        if (next.empty()) continue;
        if (!family.contains(next)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        part.action_choice[L] = j;  // lowest index wins the tie-break
        break;
      }
    }
  }
  return part;
}

PositiveClass classify_positive(const GameSpec& spec, const Support& support) {
  if (support.empty()) throw std::invalid_argument("classify_positive: empty support");
  if (support.intersects(spec.target)) return PositiveClass::kPosP1;
  SupportFamily closure = reachable_beliefs(spec, Player::kTwo, support, false);
  PositivePartition part = sure_safety_fixpoint(spec, closure);
  return part.sure_p2.contains(support) ? PositiveClass::kSureP2 : PositiveClass::kPosP1;
}

FiniteMemoryStrategy synthesize_sure_p2(const GameSpec& spec,
                                        const PositivePartition& partition) {
  FiniteMemoryStrategy s;
  s.player = Player::kTwo;
  s.kind = "sure_p2";
  s.init_rule = FiniteMemoryStrategy::InitRule::kBeliefLookup;

  const auto members = partition.sure_p2.sorted_members();
  std::map<Support, uint32_t> index;
  for (const Support& L : members) {
    MemoryLabel lab;
    lab.kind = MemoryLabel::Kind::kBelief;
    lab.support = L;
    lab.text = "belief {" + [&] {
      std::string t;
      for (const std::string& n : spec.names_of(L)) t += (t.empty() ? "" : " ") + n;
      return t;
    }() + "}";
    index[L] = s.n_memory();
    s.memory.push_back(lab);
    s.init_table[L] = index[L];
  }
  // Fallback state for impossible observations: plays the first action.
  MemoryLabel sink;
  sink.kind = MemoryLabel::Kind::kSink;
  sink.text = "sink";
  const uint32_t sink_idx = s.n_memory();
  s.memory.push_back(sink);

  const uint32_t n_sig = spec.n_signals(Player::kTwo);
  for (const Support& L : members) {
    const uint32_t j = partition.action_choice.at(L);
    s.output.push_back(ActionDist{{1.0, j}});
    std::vector<MemoryDist> row(n_sig);
    for (uint32_t d = 0; d < n_sig; ++d) {
      Support next = belief_update(spec, Player::kTwo, L, d);
      if (!next.empty() && partition.sure_p2.contains(next))
        row[d] = MemoryDist{{1.0, index.at(next)}};
      else
        row[d] = MemoryDist{{1.0, sink_idx}};
    }
    s.update.push_back(std::move(row));
  }
  s.output.push_back(ActionDist{{1.0, 0}});
  s.update.push_back(std::vector<MemoryDist>(n_sig, MemoryDist{{1.0, sink_idx}}));
  return s;
}

SupportFamily full_safety_lattice(const GameSpec& spec) {
  const Support safe_mask = Support::full(spec.n_states()).minus(spec.target);
  SupportFamily family(spec.n_states(), safe_mask);
  const auto safe_states = safe_mask.members();
  if (safe_states.size() > 20)
    throw std::invalid_argument("full_safety_lattice: too many non-target states");
  const uint64_t total = 1ull << safe_states.size();
  for (uint64_t bits = 1; bits < total; ++bits) {
    Support L(spec.n_states());
    for (size_t i = 0; i < safe_states.size(); ++i)
      if ((bits >> i) & 1ull) L.set(safe_states[i]);
    family.insert(L);
  }
  return family;
}

const char* to_string(PositiveClass c) {
  return c == PositiveClass::kPosP1 ? "pos_p1" : "sure_p2";
}

}  // namespace belief_arena

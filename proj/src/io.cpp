#include "belief_arena/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace belief_arena {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Token {
  std::string text;
  uint32_t line;
  uint32_t column;
};

std::vector<std::vector<Token>> tokenize_lines(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  uint32_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<Token> toks;
    size_t pos = 0;
    while (pos < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
        continue;
      }
      if (line[pos] == '#') break;
      if (line[pos] == '"') {
        size_t end = line.find('"', pos + 1);
        if (end == std::string::npos)
          throw ParseError(line_no, static_cast<uint32_t>(pos + 1), "unterminated string");
        toks.push_back({line.substr(pos, end - pos + 1), line_no,
                        static_cast<uint32_t>(pos + 1)});
        pos = end + 1;
        continue;
      }
      size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])) &&
             line[end] != '#')
        ++end;
      toks.push_back({line.substr(pos, end - pos), line_no, static_cast<uint32_t>(pos + 1)});
      pos = end;
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

double prob_to_double(const Rat& r) { return r.to_double(); }

std::string format_prob(double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", p);
  return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string support_csv(const GameSpec& spec, const Support& s) {
  if (s.empty()) return "-";
  std::string out;
  for (const std::string& n : spec.names_of(s)) out += (out.empty() ? "" : ",") + n;
  return out;
}

Support support_from_csv(const GameSpec& spec, const std::string& csv) {
  if (csv == "-") return Support(spec.n_states());
  return spec.support_of(split_csv(csv));
}

}  // namespace

GameSpec parse_game(const std::string& text, const std::string& name,
                    bool refuse_invalid) {
  const auto lines = tokenize_lines(text);
  GameSpec spec;
  spec.name = name;

  auto expect_names = [&](const std::vector<Token>& toks) {
    std::vector<std::string> names;
    for (size_t t = 1; t < toks.size(); ++t) {
      if (!valid_name(toks[t].text))
        throw ParseError(toks[t].line, toks[t].column, "invalid name '" + toks[t].text + "'");
      names.push_back(toks[t].text);
    }
    return names;
  };

  // Declaration pass.
  std::vector<std::string> target_names;
  for (const auto& toks : lines) {
    const std::string& dir = toks[0].text;
    if (dir == "states") spec.states = expect_names(toks);
    else if (dir == "target") target_names = expect_names(toks);
    else if (dir == "actions1") spec.actions1 = expect_names(toks);
    else if (dir == "actions2") spec.actions2 = expect_names(toks);
    else if (dir == "signals1") spec.signals1 = expect_names(toks);
    else if (dir == "signals2") spec.signals2 = expect_names(toks);
    else if (dir == "act1" || dir == "act2" || dir == "absorbing" || dir == "init" ||
             dir == "trans")
      continue;
    else
      throw ParseError(toks[0].line, toks[0].column, "unknown directive '" + dir + "'");
  }
  if (spec.states.empty())
    throw ParseError(1, 1, "missing states declaration");
  if (spec.actions1.empty() || spec.actions2.empty())
    throw ParseError(1, 1, "missing action declarations");
  if (spec.signals1.empty() || spec.signals2.empty())
    throw ParseError(1, 1, "missing signal declarations");
  {
    std::set<std::string> seen;
    for (const std::string& s : spec.states)
      if (!seen.insert(s).second) throw ParseError(1, 1, "duplicate state '" + s + "'");
  }

  spec.target = Support(spec.n_states());
  for (const std::string& t : target_names) {
    int idx = spec.state_index(t);
    if (idx < 0) throw ParseError(1, 1, "unknown target state '" + t + "'");
    spec.target.set(static_cast<uint32_t>(idx));
  }

  spec.act1.assign(spec.signals1.size(), 0);
  spec.act2.assign(spec.signals2.size(), 0);
  std::vector<bool> mapped1(spec.signals1.size(), false), mapped2(spec.signals2.size(), false);
  for (const auto& toks : lines) {
    const std::string& dir = toks[0].text;
    if (dir != "act1" && dir != "act2") continue;
    const Player p = dir == "act1" ? Player::kOne : Player::kTwo;
    for (size_t t = 1; t < toks.size(); ++t) {
      const std::string& pair = toks[t].text;
      size_t colon = pair.find(':');
      if (colon == std::string::npos)
        throw ParseError(toks[t].line, toks[t].column, "expected sig:action");
      const std::string sig = pair.substr(0, colon);
      const std::string act = pair.substr(colon + 1);
      int si = spec.signal_index(p, sig);
      int ai = spec.action_index(p, act);
      if (si < 0) throw ParseError(toks[t].line, toks[t].column, "unknown signal '" + sig + "'");
      if (ai < 0) throw ParseError(toks[t].line, toks[t].column, "unknown action '" + act + "'");
      if (p == Player::kOne) {
        spec.act1[si] = static_cast<uint32_t>(ai);
        mapped1[si] = true;
      } else {
        spec.act2[si] = static_cast<uint32_t>(ai);
        mapped2[si] = true;
      }
    }
  }
  for (size_t s = 0; s < mapped1.size(); ++s)
    if (!mapped1[s]) throw ParseError(1, 1, "signal '" + spec.signals1[s] + "' has no action");
  for (size_t s = 0; s < mapped2.size(); ++s)
    if (!mapped2[s]) throw ParseError(1, 1, "signal '" + spec.signals2[s] + "' has no action");

  const uint32_t nI = spec.n_actions(Player::kOne);
  const uint32_t nJ = spec.n_actions(Player::kTwo);
  spec.kernel.assign(static_cast<size_t>(spec.n_states()) * nI * nJ, {});

  // Content pass: absorbing sugar, init, transitions.
  for (const auto& toks : lines) {
    const std::string& dir = toks[0].text;
    if (dir == "absorbing") {
      for (size_t t = 1; t < toks.size(); ++t) {
        int k = spec.state_index(toks[t].text);
        if (k < 0)
          throw ParseError(toks[t].line, toks[t].column,
                           "unknown state '" + toks[t].text + "'");
        for (uint32_t i = 0; i < nI; ++i) {
          uint32_t c = 0;
          while (c < spec.act1.size() && spec.act1[c] != i) ++c;
          if (c == spec.act1.size())
            throw ParseError(toks[t].line, toks[t].column,
                             "no signal declared for action " + spec.actions1[i]);
          for (uint32_t j = 0; j < nJ; ++j) {
            uint32_t d = 0;
            while (d < spec.act2.size() && spec.act2[d] != j) ++d;
            if (d == spec.act2.size())
              throw ParseError(toks[t].line, toks[t].column,
                               "no signal declared for action " + spec.actions2[j]);
            auto& outs = spec.kernel[spec.kernel_index(static_cast<uint32_t>(k), i, j)];
            if (!outs.empty())
              throw ParseError(toks[t].line, toks[t].column,
                               "absorbing state '" + toks[t].text + "' already has transitions");
            outs.push_back({c, d, static_cast<uint32_t>(k), 1.0, Rat(1)});
          }
        }
      }
    } else if (dir == "init") {
      if (toks.size() < 3 || (toks.size() - 1) % 2 != 0)
        throw ParseError(toks[0].line, toks[0].column, "expected init state prob ...");
      for (size_t t = 1; t + 1 < toks.size(); t += 2) {
        int k = spec.state_index(toks[t].text);
        if (k < 0)
          throw ParseError(toks[t].line, toks[t].column,
                           "unknown state '" + toks[t].text + "'");
        Rat pr;
        try {
          pr = Rat::parse(toks[t + 1].text);
        } catch (const std::exception& e) {
          throw ParseError(toks[t + 1].line, toks[t + 1].column, e.what());
        }
        spec.init.push_back({static_cast<uint32_t>(k), pr});
      }
    } else if (dir == "trans") {
      if (toks.size() < 5 || toks[4].text != "=")
        throw ParseError(toks[0].line, toks[0].column, "expected trans k i j = ...");
      int k = spec.state_index(toks[1].text);
      int i = spec.action_index(Player::kOne, toks[2].text);
      int j = spec.action_index(Player::kTwo, toks[3].text);
      if (k < 0) throw ParseError(toks[1].line, toks[1].column, "unknown state '" + toks[1].text + "'");
      if (i < 0) throw ParseError(toks[2].line, toks[2].column, "unknown action '" + toks[2].text + "'");
      if (j < 0) throw ParseError(toks[3].line, toks[3].column, "unknown action '" + toks[3].text + "'");
      auto& outs = spec.kernel[spec.kernel_index(static_cast<uint32_t>(k),
                                                 static_cast<uint32_t>(i),
                                                 static_cast<uint32_t>(j))];
      if (!outs.empty())
        throw ParseError(toks[1].line, toks[1].column,
                         "duplicate transition for (" + toks[1].text + "," + toks[2].text +
                             "," + toks[3].text + ")");
      size_t t = 5;
      while (t < toks.size()) {
        if (t + 3 >= toks.size())
          throw ParseError(toks[t].line, toks[t].column, "expected p c d l");
        Rat pr;
        try {
          pr = Rat::parse(toks[t].text);
        } catch (const std::exception& e) {
          throw ParseError(toks[t].line, toks[t].column, e.what());
        }
        int c = spec.signal_index(Player::kOne, toks[t + 1].text);
        int d = spec.signal_index(Player::kTwo, toks[t + 2].text);
        int l = spec.state_index(toks[t + 3].text);
        if (c < 0) throw ParseError(toks[t + 1].line, toks[t + 1].column, "unknown signal '" + toks[t + 1].text + "'");
        if (d < 0) throw ParseError(toks[t + 2].line, toks[t + 2].column, "unknown signal '" + toks[t + 2].text + "'");
        if (l < 0) throw ParseError(toks[t + 3].line, toks[t + 3].column, "unknown state '" + toks[t + 3].text + "'");
        outs.push_back({static_cast<uint32_t>(c), static_cast<uint32_t>(d),
                        static_cast<uint32_t>(l), prob_to_double(pr), pr});
        t += 4;
        if (t < toks.size()) {
          if (toks[t].text != "|")
            throw ParseError(toks[t].line, toks[t].column, "expected '|'");
          ++t;
        }
      }
    }
  }

  for (uint32_t k = 0; k < spec.n_states(); ++k)
    for (uint32_t i = 0; i < nI; ++i)
      for (uint32_t j = 0; j < nJ; ++j)
        if (spec.outcomes(k, i, j).empty())
          throw ParseError(1, 1,
                           "incomplete kernel at (" + spec.states[k] + "," +
                               spec.actions1[i] + "," + spec.actions2[j] + ")");

  ValidationReport report = validate_game(spec);
  if (!report.ok && refuse_invalid) {
    std::string msg = "game fails validation:";
    for (const auto& issue : report.issues)
      if (issue.severity == Severity::kError)
        msg += "\n  " + issue.location + ": " + issue.message;
    throw std::invalid_argument(msg);
  }
  return spec;
}

std::string serialize_game(const GameSpec& spec) {
  std::ostringstream out;
  auto names_line = [&](const char* dir, const std::vector<std::string>& names) {
    out << dir;
    for (const std::string& n : names) out << " " << n;
    out << "\n";
  };
  names_line("states", spec.states);
  out << "target";
  for (uint32_t k : spec.target.members()) out << " " << spec.states[k];
  out << "\n";
  names_line("actions1", spec.actions1);
  names_line("actions2", spec.actions2);
  names_line("signals1", spec.signals1);
  names_line("signals2", spec.signals2);
  out << "act1";
  for (size_t s = 0; s < spec.signals1.size(); ++s)
    out << " " << spec.signals1[s] << ":" << spec.actions1[spec.act1[s]];
  out << "\n";
  out << "act2";
  for (size_t s = 0; s < spec.signals2.size(); ++s)
    out << " " << spec.signals2[s] << ":" << spec.actions2[spec.act2[s]];
  out << "\n";
  for (const auto& [k, pr] : spec.init)
    out << "init " << spec.states[k] << " " << pr.to_string() << "\n";
  for (uint32_t k = 0; k < spec.n_states(); ++k) {
    for (uint32_t i = 0; i < spec.n_actions(Player::kOne); ++i) {
      for (uint32_t j = 0; j < spec.n_actions(Player::kTwo); ++j) {
        out << "trans " << spec.states[k] << " " << spec.actions1[i] << " "
            << spec.actions2[j] << " =";
        const auto& outs = spec.outcomes(k, i, j);
        for (size_t o = 0; o < outs.size(); ++o) {
          if (o) out << " |";
          out << " " << outs[o].pr.to_string() << " " << spec.signals1[outs[o].c] << " "
              << spec.signals2[outs[o].d] << " " << spec.states[outs[o].l];
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

Distribution initial_distribution(const GameSpec& spec) {
  if (spec.init.empty())
    return Distribution::uniform(Support::full(spec.n_states()));
  std::vector<Rat> weights(spec.n_states(), Rat());
  for (const auto& [k, pr] : spec.init) weights[k] = weights[k] + pr;
  return Distribution::from_exact(std::move(weights));
}

Support parse_support_names(const GameSpec& spec, const std::string& csv) {
  Support s = spec.support_of(split_csv(csv));
  if (s.empty()) throw std::invalid_argument("empty support");
  return s;
}

Distribution parse_distribution_arg(const GameSpec& spec, const std::string& arg) {
  std::vector<Rat> weights(spec.n_states(), Rat());
  bool weighted = arg.find(':') != std::string::npos;
  if (!weighted) return Distribution::uniform(parse_support_names(spec, arg));
  for (const std::string& entry : split_csv(arg)) {
    size_t colon = entry.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("expected state:prob in distribution");
    int k = spec.state_index(entry.substr(0, colon));
    if (k < 0) throw std::invalid_argument("unknown state: " + entry.substr(0, colon));
    weights[k] = weights[k] + Rat::parse(entry.substr(colon + 1));
  }
  return Distribution::from_exact(std::move(weights));
}

namespace {

const char* kind_word(MemoryLabel::Kind k) {
  switch (k) {
    case MemoryLabel::Kind::kBelief: return "belief";
    case MemoryLabel::Kind::kPessimisticBelief: return "pbelief";
    case MemoryLabel::Kind::kRoam: return "roam";
    case MemoryLabel::Kind::kCertificate: return "cert";
    case MemoryLabel::Kind::kSink: return "sink";
    case MemoryLabel::Kind::kPlain: return "plain";
  }
  return "plain";
}

MemoryLabel::Kind kind_from_word(const std::string& w) {
  if (w == "belief") return MemoryLabel::Kind::kBelief;
  if (w == "pbelief") return MemoryLabel::Kind::kPessimisticBelief;
  if (w == "roam") return MemoryLabel::Kind::kRoam;
  if (w == "cert") return MemoryLabel::Kind::kCertificate;
  if (w == "sink") return MemoryLabel::Kind::kSink;
  return MemoryLabel::Kind::kPlain;
}

const char* rule_word(FiniteMemoryStrategy::InitRule r) {
  switch (r) {
    case FiniteMemoryStrategy::InitRule::kTableOnly: return "table";
    case FiniteMemoryStrategy::InitRule::kBeliefLookup: return "belief";
    case FiniteMemoryStrategy::InitRule::kPessimisticBeliefLookup: return "pbelief";
    case FiniteMemoryStrategy::InitRule::kAnySupport: return "any";
  }
  return "table";
}

FiniteMemoryStrategy::InitRule rule_from_word(const std::string& w) {
  if (w == "belief") return FiniteMemoryStrategy::InitRule::kBeliefLookup;
  if (w == "pbelief") return FiniteMemoryStrategy::InitRule::kPessimisticBeliefLookup;
  if (w == "any") return FiniteMemoryStrategy::InitRule::kAnySupport;
  return FiniteMemoryStrategy::InitRule::kTableOnly;
}

}  // namespace

std::string serialize_strategy(const GameSpec& spec, const FiniteMemoryStrategy& s) {
  std::ostringstream out;
  out << "strategy\n";
  out << "game " << spec.name << "\n";
  out << "player " << (s.player == Player::kOne ? 1 : 2) << "\n";
  out << "kind " << s.kind << "\n";
  out << "initrule " << rule_word(s.init_rule) << "\n";
  if (s.target_mask.universe() == spec.n_states() && !s.target_mask.empty())
    out << "targetmask " << support_csv(spec, s.target_mask) << "\n";
  out << "memories " << s.n_memory() << "\n";
  for (uint32_t m = 0; m < s.n_memory(); ++m) {
    const MemoryLabel& lab = s.memory[m];
    out << "memory " << m << " " << kind_word(lab.kind);
    if (lab.kind == MemoryLabel::Kind::kBelief ||
        lab.kind == MemoryLabel::Kind::kPessimisticBelief)
      out << " " << support_csv(spec, lab.support);
    if (lab.kind == MemoryLabel::Kind::kRoam || lab.kind == MemoryLabel::Kind::kCertificate)
      out << " " << lab.level;
    out << " \"" << lab.text << "\"\n";
  }
  for (const auto& [sup, m] : s.init_table)
    out << "init " << support_csv(spec, sup) << " = " << m << "\n";
  const auto& signals = spec.signal_names(s.player);
  const auto& actions = spec.action_names(s.player);
  for (uint32_t m = 0; m < s.n_memory(); ++m) {
    out << "output " << m << " =";
    for (size_t e = 0; e < s.output[m].size(); ++e) {
      if (e) out << " |";
      out << " " << format_prob(s.output[m][e].first) << " "
          << actions[s.output[m][e].second];
    }
    out << "\n";
  }
  for (uint32_t m = 0; m < s.n_memory(); ++m) {
    for (uint32_t sig = 0; sig < signals.size(); ++sig) {
      out << "update " << m << " " << signals[sig] << " =";
      for (size_t e = 0; e < s.update[m][sig].size(); ++e) {
        if (e) out << " |";
        out << " " << format_prob(s.update[m][sig][e].first) << " "
            << s.update[m][sig][e].second;
      }
      out << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

FiniteMemoryStrategy parse_strategy(const std::string& text, const GameSpec& spec) {
  const auto lines = tokenize_lines(text);
  FiniteMemoryStrategy s;
  if (lines.empty() || lines[0][0].text != "strategy")
    throw ParseError(1, 1, "expected strategy header");

  auto parse_dist_tail = [&](const std::vector<Token>& toks, size_t start,
                             auto name_to_index) {
    std::vector<std::pair<double, uint32_t>> dist;
    size_t t = start;
    while (t < toks.size()) {
      if (t + 1 >= toks.size())
        throw ParseError(toks[t].line, toks[t].column, "expected p value");
      double p;
      try {
        p = Rat::parse(toks[t].text).to_double();
      } catch (const std::exception& e) {
        throw ParseError(toks[t].line, toks[t].column, e.what());
      }
      dist.push_back({p, name_to_index(toks[t + 1])});
      t += 2;
      if (t < toks.size()) {
        if (toks[t].text != "|") throw ParseError(toks[t].line, toks[t].column, "expected '|'");
        ++t;
      }
    }
    return dist;
  };

  uint32_t n_memories = 0;
  for (const auto& toks : lines) {
    const std::string& dir = toks[0].text;
    if (dir == "strategy" || dir == "end") continue;
    if (dir == "game") continue;
    if (dir == "player") {
      s.player = toks.at(1).text == "1" ? Player::kOne : Player::kTwo;
    } else if (dir == "kind") {
      s.kind = toks.at(1).text;
    } else if (dir == "initrule") {
      s.init_rule = rule_from_word(toks.at(1).text);
    } else if (dir == "targetmask") {
      s.target_mask = support_from_csv(spec, toks.at(1).text);
    } else if (dir == "memories") {
      n_memories = static_cast<uint32_t>(std::stoul(toks.at(1).text));
      s.memory.resize(n_memories);
      s.output.resize(n_memories);
      s.update.assign(n_memories,
                      std::vector<MemoryDist>(spec.n_signals(s.player)));
    } else if (dir == "memory") {
      const uint32_t m = static_cast<uint32_t>(std::stoul(toks.at(1).text));
      if (m >= n_memories)
        throw ParseError(toks[1].line, toks[1].column, "memory index out of range");
      MemoryLabel lab;
      lab.kind = kind_from_word(toks.at(2).text);
      size_t t = 3;
      if (lab.kind == MemoryLabel::Kind::kBelief ||
          lab.kind == MemoryLabel::Kind::kPessimisticBelief) {
        lab.support = support_from_csv(spec, toks.at(t).text);
        ++t;
      } else if (lab.kind == MemoryLabel::Kind::kRoam ||
                 lab.kind == MemoryLabel::Kind::kCertificate) {
        lab.level = std::stoi(toks.at(t).text);
        ++t;
      }
      if (t < toks.size() && toks[t].text.size() >= 2 && toks[t].text.front() == '"')
        lab.text = toks[t].text.substr(1, toks[t].text.size() - 2);
      s.memory[m] = lab;
    } else if (dir == "init") {
      if (toks.size() != 4 || toks[2].text != "=")
        throw ParseError(toks[0].line, toks[0].column, "expected init support = memory");
      Support sup = support_from_csv(spec, toks[1].text);
      s.init_table[sup] = static_cast<uint32_t>(std::stoul(toks[3].text));
    } else if (dir == "output") {
      const uint32_t m = static_cast<uint32_t>(std::stoul(toks.at(1).text));
      if (m >= n_memories || toks.at(2).text != "=")
        throw ParseError(toks[0].line, toks[0].column, "expected output m = ...");
      s.output[m] = parse_dist_tail(toks, 3, [&](const Token& tok) -> uint32_t {
        int a = spec.action_index(s.player, tok.text);
        if (a < 0) throw ParseError(tok.line, tok.column, "unknown action '" + tok.text + "'");
        return static_cast<uint32_t>(a);
      });
    } else if (dir == "update") {
      const uint32_t m = static_cast<uint32_t>(std::stoul(toks.at(1).text));
      int sig = spec.signal_index(s.player, toks.at(2).text);
      if (m >= n_memories)
        throw ParseError(toks[1].line, toks[1].column, "memory index out of range");
      if (sig < 0)
        throw ParseError(toks[2].line, toks[2].column, "unknown signal '" + toks[2].text + "'");
      if (toks.at(3).text != "=")
        throw ParseError(toks[3].line, toks[3].column, "expected '='");
      s.update[m][sig] = parse_dist_tail(toks, 4, [&](const Token& tok) -> uint32_t {
        uint32_t v = static_cast<uint32_t>(std::stoul(tok.text));
        if (v >= n_memories) throw ParseError(tok.line, tok.column, "memory index out of range");
        return v;
      });
    } else {
      throw ParseError(toks[0].line, toks[0].column, "unknown directive '" + dir + "'");
    }
  }
  s.validate(spec);
  return s;
}

std::string serialize_family(const GameSpec& spec, const SupportFamily& family) {
  std::ostringstream out;
  for (const Support& s : family.sorted_members())
    out << "support " << support_csv(spec, s) << "\n";
  return out.str();
}

SupportFamily parse_family(const std::string& text, const GameSpec& spec) {
  SupportFamily family(spec.n_states());
  for (const auto& toks : tokenize_lines(text)) {
    if (toks[0].text != "support")
      throw ParseError(toks[0].line, toks[0].column, "expected support lines");
    family.insert(support_from_csv(spec, toks.at(1).text));
  }
  return family;
}

std::string write_classification_report(const GameSpec& spec, const LChain& chain,
                                        const PositivePartition& partition) {
  if (chain.game_name != partition.game_name || chain.game_name != spec.name)
    throw std::invalid_argument(
        "classification report: chain and partition were computed on different games");
  nlohmann::ordered_json report;
  report["game"] = chain.game_name;
  report["universe_size"] = chain.examined.size();
  report["chain_length"] = chain.distinct_levels();

  std::vector<std::pair<std::vector<std::string>, ThreeWayClass>> rows;
  rows.reserve(chain.classes.size());
  for (const auto& [sup, cls] : chain.classes) rows.push_back({spec.names_of(sup), cls});
  std::sort(rows.begin(), rows.end());

  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& [names, cls] : rows) {
    nlohmann::ordered_json row;
    row["support"] = names;
    row["class"] = to_string(cls);
    classes.push_back(row);
  }
  report["classes"] = classes;
  report["phi_fixpoint_size"] = partition.sure_p2.size();
  return report.dump(2) + "\n";
}

std::string write_simulation_report(const std::string& game_name,
                                    const SimulationReport& report) {
  nlohmann::ordered_json j;
  j["game"] = game_name;
  j["episodes"] = report.episodes;
  j["reach_count"] = report.reach_count;
  j["certified_safe_count"] = report.certified_safe_count;
  j["horizon_exhausted_count"] = report.horizon_exhausted_count;
  j["gamma1_hat"] = report.gamma1_hat;
  j["wilson_low"] = report.wilson_low;
  j["wilson_high"] = report.wilson_high;
  j["seed"] = report.seed;
  j["horizon"] = report.horizon;
  j["belief_violations"] = report.belief_violations;
  return j.dump(2) + "\n";
}

std::string write_validation_report(const std::string& game_name,
                                    const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["game"] = game_name;
  j["ok"] = report.ok;
  nlohmann::ordered_json issues = nlohmann::ordered_json::array();
  for (const auto& issue : report.issues) {
    nlohmann::ordered_json row;
    row["severity"] = issue.severity == Severity::kError ? "error" : "warning";
    row["location"] = issue.location;
    row["message"] = issue.message;
    issues.push_back(row);
  }
  j["issues"] = issues;
  return j.dump(2) + "\n";
}

GeneratorProfile GeneratorProfile::parse(const std::string& text) {
  GeneratorProfile p;
  for (const std::string& entry : split_csv(text)) {
    size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("profile entries must look like k=3");
    const std::string key = entry.substr(0, eq);
    const uint32_t val = static_cast<uint32_t>(std::stoul(entry.substr(eq + 1)));
    if (key == "k") p.states = val;
    else if (key == "t") p.targets = val;
    else if (key == "i") p.actions1 = val;
    else if (key == "j") p.actions2 = val;
    else if (key == "c") p.signals1 = val;
    else if (key == "d") p.signals2 = val;
    else if (key == "out") p.max_outcomes = val;
    else if (key == "den") p.denominator = val;
    else if (key == "revealing") p.revealing = val != 0;
    else throw std::invalid_argument("unknown profile key: " + key);
  }
  return p;
}

GameSpec generate_random_game(const GeneratorProfile& profile, uint64_t seed) {
  if (profile.states == 0 || profile.targets > profile.states)
    throw std::invalid_argument("generate_random_game: bad state counts");
  if (!profile.revealing &&
      (profile.signals1 < profile.actions1 || profile.signals2 < profile.actions2))
    throw std::invalid_argument("generate_random_game: need at least one signal per action");

  uint64_t state = splitmix64(seed ^ 0xC0FFEEull);
  auto next = [&] {
    state = splitmix64(state);
    return state;
  };

  GameSpec spec;
  spec.name = (profile.revealing ? "rev" : "gen") + std::to_string(seed);
  for (uint32_t k = 0; k < profile.states; ++k) spec.states.push_back("s" + std::to_string(k));
  spec.target = Support(profile.states);
  for (uint32_t t = 0; t < profile.targets; ++t)
    spec.target.set(profile.states - 1 - t);
  for (uint32_t i = 0; i < profile.actions1; ++i)
    spec.actions1.push_back("a" + std::to_string(i));
  for (uint32_t j = 0; j < profile.actions2; ++j)
    spec.actions2.push_back("b" + std::to_string(j));

  if (profile.revealing) {
    // One signal per (own action, opponent action, successor).
    for (uint32_t i = 0; i < profile.actions1; ++i)
      for (uint32_t j = 0; j < profile.actions2; ++j)
        for (uint32_t l = 0; l < profile.states; ++l) {
          spec.signals1.push_back("c" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                                  std::to_string(l));
          spec.act1.push_back(i);
        }
    for (uint32_t j = 0; j < profile.actions2; ++j)
      for (uint32_t i = 0; i < profile.actions1; ++i)
        for (uint32_t l = 0; l < profile.states; ++l) {
          spec.signals2.push_back("d" + std::to_string(j) + "_" + std::to_string(i) + "_" +
                                  std::to_string(l));
          spec.act2.push_back(j);
        }
  } else {
    for (uint32_t c = 0; c < profile.signals1; ++c) {
      spec.signals1.push_back("c" + std::to_string(c));
      spec.act1.push_back(c % profile.actions1);
    }
    for (uint32_t d = 0; d < profile.signals2; ++d) {
      spec.signals2.push_back("d" + std::to_string(d));
      spec.act2.push_back(d % profile.actions2);
    }
  }

  auto reveal_index1 = [&](uint32_t i, uint32_t j, uint32_t l) {
    return (i * profile.actions2 + j) * profile.states + l;
  };
  auto reveal_index2 = [&](uint32_t j, uint32_t i, uint32_t l) {
    return (j * profile.actions1 + i) * profile.states + l;
  };

  spec.kernel.assign(
      static_cast<size_t>(profile.states) * profile.actions1 * profile.actions2, {});
  for (uint32_t k = 0; k < profile.states; ++k) {
    for (uint32_t i = 0; i < profile.actions1; ++i) {
      for (uint32_t j = 0; j < profile.actions2; ++j) {
        const uint32_t count = 1 + static_cast<uint32_t>(next() % profile.max_outcomes);
        const uint32_t den = std::max(profile.denominator, count);
        std::vector<uint32_t> weights(count, 1);
        for (uint32_t extra = 0; extra < den - count; ++extra)
          ++weights[next() % count];
        std::map<std::tuple<uint32_t, uint32_t, uint32_t>, uint32_t> merged;
        for (uint32_t o = 0; o < count; ++o) {
          const uint32_t l = static_cast<uint32_t>(next() % profile.states);
          uint32_t c, d;
          if (profile.revealing) {
            c = reveal_index1(i, j, l);
            d = reveal_index2(j, i, l);
          } else {
            const uint32_t c_span = (profile.signals1 + profile.actions1 - 1 - i) /
                                    profile.actions1;
            const uint32_t d_span = (profile.signals2 + profile.actions2 - 1 - j) /
                                    profile.actions2;
            c = i + profile.actions1 * static_cast<uint32_t>(next() % c_span);
            d = j + profile.actions2 * static_cast<uint32_t>(next() % d_span);
          }
          merged[{c, d, l}] += weights[o];
        }
        auto& outs = spec.kernel[spec.kernel_index(k, i, j)];
        for (const auto& [key, w] : merged) {
          const Rat pr = Rat::from_fraction(w, den);
          outs.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                          pr.to_double(), pr});
        }
      }
    }
  }

  const Rat share = Rat::from_fraction(1, profile.states);
  for (uint32_t k = 0; k < profile.states; ++k) spec.init.push_back({k, share});
  return spec;
}

}  // namespace belief_arena

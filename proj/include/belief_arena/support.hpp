#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace belief_arena {

/// Subset of an ordered finite universe with bit-vector semantics.
///
/// Supports are the unit of classification everywhere: state subsets of a
/// game, belief sets, and subsets of product-game state spaces. Equality,
/// hashing and the subset tests are exact. Universes up to 256 bits live
/// inline; larger ones spill to the heap.
class Support {
 public:
  Support() = default;
  explicit Support(uint32_t universe)
      : universe_(universe), nwords_((universe + 63) / 64) {
    if (nwords_ > kInlineWords) spill_.assign(nwords_, 0);
  }

  static Support full(uint32_t universe) {
    Support s(universe);
    for (uint32_t i = 0; i < universe; ++i) s.set(i);
    return s;
  }

  static Support of(uint32_t universe, std::initializer_list<uint32_t> bits) {
    Support s(universe);
    for (uint32_t b : bits) s.set(b);
    return s;
  }

  uint32_t universe() const { return universe_; }

  bool test(uint32_t i) const { return (words()[i >> 6] >> (i & 63)) & 1ull; }
  void set(uint32_t i) {
    if (i >= universe_) throw std::out_of_range("Support::set: bit outside universe");
    words()[i >> 6] |= 1ull << (i & 63);
  }
  void reset(uint32_t i) { words()[i >> 6] &= ~(1ull << (i & 63)); }

  bool empty() const {
    for (uint32_t w = 0; w < nwords_; ++w)
      if (words()[w]) return false;
    return true;
  }

  uint32_t count() const {
    uint32_t n = 0;
    for (uint32_t w = 0; w < nwords_; ++w)
      n += static_cast<uint32_t>(__builtin_popcountll(words()[w]));
    return n;
  }

  bool subset_of(const Support& o) const {
    for (uint32_t w = 0; w < nwords_; ++w)
      if (words()[w] & ~o.words()[w]) return false;
    return true;
  }

  bool intersects(const Support& o) const {
    for (uint32_t w = 0; w < nwords_; ++w)
      if (words()[w] & o.words()[w]) return true;
    return false;
  }

  Support minus(const Support& o) const {
    Support r = *this;
    for (uint32_t w = 0; w < nwords_; ++w) r.words()[w] &= ~o.words()[w];
    return r;
  }

  Support intersect(const Support& o) const {
    Support r = *this;
    for (uint32_t w = 0; w < nwords_; ++w) r.words()[w] &= o.words()[w];
    return r;
  }

  Support unite(const Support& o) const {
    Support r = *this;
    for (uint32_t w = 0; w < nwords_; ++w) r.words()[w] |= o.words()[w];
    return r;
  }

  void unite_in_place(const Support& o) {
    for (uint32_t w = 0; w < nwords_; ++w) words()[w] |= o.words()[w];
  }

  /// Calls f(index) for every member, lowest first. No allocation.
  template <class F>
  void for_each(F&& f) const {
    for (uint32_t w = 0; w < nwords_; ++w) {
      uint64_t bits = words()[w];
      while (bits) {
        const uint32_t b = static_cast<uint32_t>(__builtin_ctzll(bits));
        f(w * 64 + b);
        bits &= bits - 1;
      }
    }
  }

  std::vector<uint32_t> members() const {
    std::vector<uint32_t> out;
    out.reserve(count());
    for_each([&](uint32_t i) { out.push_back(i); });
    return out;
  }

  bool operator==(const Support& o) const {
    if (universe_ != o.universe_) return false;
    for (uint32_t w = 0; w < nwords_; ++w)
      if (words()[w] != o.words()[w]) return false;
    return true;
  }
  bool operator!=(const Support& o) const { return !(*this == o); }
  bool operator<(const Support& o) const {
    if (universe_ != o.universe_) return universe_ < o.universe_;
    for (uint32_t w = 0; w < nwords_; ++w)
      if (words()[w] != o.words()[w]) return words()[w] < o.words()[w];
    return false;
  }

  size_t hash() const {
    size_t h = universe_;
    for (uint32_t w = 0; w < nwords_; ++w)
      h = h * 0x9E3779B97F4A7C15ull + words()[w];
    return h;
  }

 private:
  static constexpr uint32_t kInlineWords = 4;

  const uint64_t* words() const {
    return nwords_ <= kInlineWords ? inline_.data() : spill_.data();
  }
  uint64_t* words() { return nwords_ <= kInlineWords ? inline_.data() : spill_.data(); }

  uint32_t universe_ = 0;
  uint32_t nwords_ = 0;
  std::array<uint64_t, kInlineWords> inline_{};
  std::vector<uint64_t> spill_;
};

struct SupportHash {
  size_t operator()(const Support& s) const { return s.hash(); }
};

/// A set of supports over one universe, optionally restricted to a mask
/// (e.g. subsets of K\T). Members are always nonempty; the empty support is
/// never stored. Membership and insertion are exact.
class SupportFamily {
 public:
  SupportFamily() = default;
  explicit SupportFamily(uint32_t universe)
      : universe_(universe), mask_(Support::full(universe)) {}
  SupportFamily(uint32_t universe, Support mask)
      : universe_(universe), mask_(std::move(mask)) {}

  uint32_t universe() const { return universe_; }
  const Support& mask() const { return mask_; }

  bool contains(const Support& s) const { return set_.count(s) != 0; }

  /// Inserts a support; rejects empty supports and supports outside the mask.
  bool insert(const Support& s) {
    if (s.universe() != universe_)
      throw std::invalid_argument("SupportFamily::insert: universe mismatch");
    if (s.empty()) throw std::invalid_argument("SupportFamily::insert: empty support");
    if (!s.subset_of(mask_))
      throw std::invalid_argument("SupportFamily::insert: support outside family universe");
    return set_.insert(s).second;
  }

  bool erase(const Support& s) { return set_.erase(s) != 0; }

  size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

  /// Members in deterministic order.
  std::vector<Support> sorted_members() const {
    std::vector<Support> v(set_.begin(), set_.end());
    std::sort(v.begin(), v.end());
    return v;
  }

  bool operator==(const SupportFamily& o) const {
    return universe_ == o.universe_ && set_ == o.set_;
  }
  bool operator!=(const SupportFamily& o) const { return !(*this == o); }

  /// True when every member's supersets inside `examined` are also members.
  bool upward_closed_within(const std::vector<Support>& examined) const {
    for (const Support& m : set_)
      for (const Support& e : examined)
        if (m.subset_of(e) && !contains(e)) return false;
    return true;
  }

 private:
  uint32_t universe_ = 0;
  Support mask_;
  std::unordered_set<Support, SupportHash> set_;
};

}  // namespace belief_arena

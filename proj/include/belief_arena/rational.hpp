#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace belief_arena {

/// Arbitrary-precision unsigned integer, base 2^32 limbs, little-endian.
/// Just enough arithmetic to back exact rational probabilities in the oracle
/// module: horizon-deep products of transition probabilities overflow int64.
class BigNat {
 public:
  BigNat() = default;
  BigNat(uint64_t v) {
    if (v) {
      limbs_.push_back(static_cast<uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
    }
  }

  bool is_zero() const { return limbs_.empty(); }

  static int cmp(const BigNat& a, const BigNat& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
  }

  friend BigNat operator+(const BigNat& a, const BigNat& b) {
    BigNat r;
    const size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.resize(n);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t s = carry;
      if (i < a.limbs_.size()) s += a.limbs_[i];
      if (i < b.limbs_.size()) s += b.limbs_[i];
      r.limbs_[i] = static_cast<uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    return r;
  }

  /// Requires a >= b.
  friend BigNat operator-(const BigNat& a, const BigNat& b) {
    if (cmp(a, b) < 0) throw std::underflow_error("BigNat subtraction underflow");
    BigNat r;
    r.limbs_.resize(a.limbs_.size());
    int64_t borrow = 0;
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      int64_t s = static_cast<int64_t>(a.limbs_[i]) - borrow -
                  (i < b.limbs_.size() ? static_cast<int64_t>(b.limbs_[i]) : 0);
      borrow = 0;
      if (s < 0) {
        s += (1ll << 32);
        borrow = 1;
      }
      r.limbs_[i] = static_cast<uint32_t>(s);
    }
    r.trim();
    return r;
  }

  friend BigNat operator*(const BigNat& a, const BigNat& b) {
    if (a.is_zero() || b.is_zero()) return BigNat();
    BigNat r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        uint64_t cur = r.limbs_[i + j] +
                       static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] + carry;
        r.limbs_[i + j] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      r.limbs_[i + b.limbs_.size()] += static_cast<uint32_t>(carry);
    }
    r.trim();
    return r;
  }

  bool fits_u128() const { return limbs_.size() <= 4; }

  unsigned __int128 to_u128() const {
    unsigned __int128 v = 0;
    for (size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
    return v;
  }

  static BigNat from_u128(unsigned __int128 v) {
    BigNat n;
    while (v) {
      n.limbs_.push_back(static_cast<uint32_t>(v));
      v >>= 32;
    }
    return n;
  }

  /// Long division: native 128-bit arithmetic when both operands fit,
  /// single-limb short division, or Knuth's algorithm D.
  static BigNat divmod(const BigNat& a, const BigNat& b, BigNat& rem) {
    if (b.is_zero()) throw std::domain_error("BigNat division by zero");
    if (a.fits_u128() && b.fits_u128()) {
      const unsigned __int128 x = a.to_u128(), y = b.to_u128();
      rem = from_u128(x % y);
      return from_u128(x / y);
    }
    if (cmp(a, b) < 0) {
      rem = a;
      return BigNat();
    }
    if (b.limbs_.size() == 1) {
      const uint64_t v = b.limbs_[0];
      BigNat q;
      q.limbs_.assign(a.limbs_.size(), 0);
      uint64_t r = 0;
      for (size_t i = a.limbs_.size(); i-- > 0;) {
        const uint64_t cur = (r << 32) | a.limbs_[i];
        q.limbs_[i] = static_cast<uint32_t>(cur / v);
        r = cur % v;
      }
      q.trim();
      rem = BigNat(r);
      return q;
    }
    // Knuth D with 32-bit limbs.
    const int shift = __builtin_clz(b.limbs_.back());
    BigNat u = a.shifted_left(shift);
    const BigNat v = b.shifted_left(shift);
    const size_t n = v.limbs_.size();
    const size_t m = u.limbs_.size() - n;
    u.limbs_.push_back(0);
    BigNat q;
    q.limbs_.assign(m + 1, 0);
    const uint64_t vtop = v.limbs_[n - 1];
    const uint64_t vnext = v.limbs_[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
      const uint64_t top = (static_cast<uint64_t>(u.limbs_[j + n]) << 32) | u.limbs_[j + n - 1];
      uint64_t qhat = top / vtop;
      uint64_t rhat = top % vtop;
      while (qhat >> 32 ||
             qhat * vnext > ((rhat << 32) | u.limbs_[j + n - 2])) {
        --qhat;
        rhat += vtop;
        if (rhat >> 32) break;
      }
      if (qhat >> 32) qhat = 0xFFFFFFFFull;  // add-back corrects the rare off-by-one
      // Multiply-subtract qhat * v from u at offset j.
      int64_t borrow = 0;
      uint64_t carry = 0;
      for (size_t i = 0; i < n; ++i) {
        const uint64_t p = qhat * v.limbs_[i] + carry;
        carry = p >> 32;
        const int64_t t = static_cast<int64_t>(u.limbs_[i + j]) -
                          static_cast<int64_t>(p & 0xFFFFFFFFull) - borrow;
        u.limbs_[i + j] = static_cast<uint32_t>(t & 0xFFFFFFFFll);
        borrow = t < 0 ? 1 : 0;
      }
      const int64_t t = static_cast<int64_t>(u.limbs_[j + n]) -
                        static_cast<int64_t>(carry) - borrow;
      u.limbs_[j + n] = static_cast<uint32_t>(t & 0xFFFFFFFFll);
      if (t < 0) {
        // qhat was one too large: add v back.
        --qhat;
        uint64_t c = 0;
        for (size_t i = 0; i < n; ++i) {
          const uint64_t s = static_cast<uint64_t>(u.limbs_[i + j]) + v.limbs_[i] + c;
          u.limbs_[i + j] = static_cast<uint32_t>(s);
          c = s >> 32;
        }
        u.limbs_[j + n] += static_cast<uint32_t>(c);
      }
      q.limbs_[j] = static_cast<uint32_t>(qhat);
    }
    q.trim();
    u.limbs_.resize(n);
    u.trim();
    rem = u.shifted_right(shift);
    return q;
  }

  static BigNat gcd(BigNat a, BigNat b) {
    if (a.fits_u128() && b.fits_u128()) {
      unsigned __int128 x = a.to_u128(), y = b.to_u128();
      while (y) {
        unsigned __int128 t = x % y;
        x = y;
        y = t;
      }
      return from_u128(x);
    }
    while (!b.is_zero()) {
      BigNat r;
      divmod(a, b, r);
      a = b;
      b = r;
    }
    return a;
  }

  uint64_t hash64() const {
    uint64_t h = 0x9E3779B97F4A7C15ull;
    for (uint32_t limb : limbs_) h = (h ^ limb) * 0x100000001B3ull;
    return h;
  }

  double to_double() const {
    double v = 0;
    for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
    return v;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    BigNat n = *this;
    const BigNat ten(10);
    std::string out;
    while (!n.is_zero()) {
      BigNat r;
      n = divmod(n, ten, r);
      out.push_back(static_cast<char>('0' + (r.is_zero() ? 0 : r.limbs_[0])));
    }
    return std::string(out.rbegin(), out.rend());
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  BigNat shifted_left(int bits) const {
    if (bits == 0) return *this;
    BigNat r;
    r.limbs_.assign(limbs_.size() + 1, 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      r.limbs_[i] |= limbs_[i] << bits;
      r.limbs_[i + 1] = static_cast<uint32_t>(
          (static_cast<uint64_t>(limbs_[i]) << bits) >> 32);
    }
    r.trim();
    return r;
  }

  BigNat shifted_right(int bits) const {
    if (bits == 0) return *this;
    BigNat r;
    r.limbs_.assign(limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
      r.limbs_[i] = limbs_[i] >> bits;
      if (i + 1 < limbs_.size())
        r.limbs_[i] |= static_cast<uint32_t>(static_cast<uint64_t>(limbs_[i + 1])
                                             << (32 - bits));
    }
    r.trim();
    return r;
  }

  std::vector<uint32_t> limbs_;
};

/// Exact rational number. Always normalized: gcd(num,den)=1, den>0, and the
/// zero value is stored as 0/1 with sign 0.
class Rat {
 public:
  Rat() : sign_(0), num_(0), den_(1) {}
  Rat(int64_t v) { *this = from_fraction(v, 1); }

  static Rat from_fraction(int64_t num, int64_t den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    int sign = 1;
    if (num < 0) { sign = -sign; num = -num; }
    if (den < 0) { sign = -sign; den = -den; }
    return make(num == 0 ? 0 : sign,
                BigNat(static_cast<uint64_t>(num)),
                BigNat(static_cast<uint64_t>(den)));
  }

  static Rat from_parts(int sign, BigNat num, BigNat den) { return make(sign, std::move(num), std::move(den)); }

  /// Parses "p/q", an integer, or a plain decimal like "0.25" (exactly).
  static Rat parse(const std::string& text);

  bool is_zero() const { return sign_ == 0; }
  bool is_negative() const { return sign_ < 0; }
  int sign() const { return sign_; }
  const BigNat& num() const { return num_; }
  const BigNat& den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigNat an = a.num_ * b.den_;
    BigNat bn = b.num_ * a.den_;
    BigNat den = a.den_ * b.den_;
    if (a.sign_ == b.sign_) return make(a.sign_, an + bn, std::move(den));
    int c = BigNat::cmp(an, bn);
    if (c == 0) return Rat();
    return c > 0 ? make(a.sign_, an - bn, std::move(den))
                 : make(b.sign_, bn - an, std::move(den));
  }

  friend Rat operator-(const Rat& a, const Rat& b) { return a + b.negated(); }

  friend Rat operator*(const Rat& a, const Rat& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return Rat();
    return make(a.sign_ * b.sign_, a.num_ * b.num_, a.den_ * b.den_);
  }

  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.sign_ == 0) throw std::domain_error("Rat: division by zero");
    if (a.sign_ == 0) return Rat();
    return make(a.sign_ * b.sign_, a.num_ * b.den_, a.den_ * b.num_);
  }

  Rat negated() const {
    Rat r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  static int cmp(const Rat& a, const Rat& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    int c = BigNat::cmp(a.num_ * b.den_, b.num_ * a.den_);
    return a.sign_ > 0 ? c : -c;
  }
  // Values are always normalized, so equality is componentwise.
  bool operator==(const Rat& o) const {
    return sign_ == o.sign_ && BigNat::cmp(num_, o.num_) == 0 &&
           BigNat::cmp(den_, o.den_) == 0;
  }
  bool operator!=(const Rat& o) const { return !(*this == o); }

  uint64_t hash64() const {
    uint64_t h = static_cast<uint64_t>(sign_ + 1);
    h = h * 0x100000001B3ull ^ num_.hash64();
    h = h * 0x100000001B3ull ^ den_.hash64();
    return h;
  }
  bool operator<(const Rat& o) const { return cmp(*this, o) < 0; }
  bool operator<=(const Rat& o) const { return cmp(*this, o) <= 0; }
  bool operator>(const Rat& o) const { return cmp(*this, o) > 0; }
  bool operator>=(const Rat& o) const { return cmp(*this, o) >= 0; }

  double to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * (num_.to_double() / den_.to_double());
  }

  std::string to_string() const {
    if (sign_ == 0) return "0";
    std::string s = sign_ < 0 ? "-" : "";
    s += num_.to_string();
    if (!(BigNat::cmp(den_, BigNat(1)) == 0)) s += "/" + den_.to_string();
    return s;
  }

 private:
  static Rat make(int sign, BigNat num, BigNat den) {
    Rat r;
    if (sign == 0 || num.is_zero()) return r;
    BigNat g = BigNat::gcd(num, den);
    BigNat rem;
    r.sign_ = sign;
    r.num_ = BigNat::divmod(num, g, rem);
    r.den_ = BigNat::divmod(den, g, rem);
    return r;
  }

  int sign_;
  BigNat num_;
  BigNat den_;
};

inline Rat Rat::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rat::parse: empty string");
  size_t slash = text.find('/');
  auto parse_nat = [](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: bad number");
    BigNat n(0);
    for (char ch : s) {
      if (ch < '0' || ch > '9') throw std::invalid_argument("Rat::parse: bad digit");
      n = n * BigNat(10) + BigNat(static_cast<uint64_t>(ch - '0'));
    }
    return n;
  };
  std::string body = text;
  int sign = 1;
  if (body[0] == '-') { sign = -1; body = body.substr(1); }
  else if (body[0] == '+') body = body.substr(1);
  if (slash != std::string::npos) {
    slash = body.find('/');
    BigNat num = parse_nat(body.substr(0, slash));
    BigNat den = parse_nat(body.substr(slash + 1));
    if (den.is_zero()) throw std::domain_error("Rat::parse: zero denominator");
    const int s = num.is_zero() ? 0 : sign;
    return make(s, std::move(num), std::move(den));
  }
  size_t dot = body.find('.');
  if (dot == std::string::npos) {
    BigNat num = parse_nat(body);
    const int s = num.is_zero() ? 0 : sign;
    return make(s, std::move(num), BigNat(1));
  }
  std::string digits = body.substr(0, dot) + body.substr(dot + 1);
  size_t frac_digits = body.size() - dot - 1;
  BigNat num = parse_nat(digits.empty() ? "0" : digits);
  BigNat den(1);
  for (size_t i = 0; i < frac_digits; ++i) den = den * BigNat(10);
  const int s = num.is_zero() ? 0 : sign;
  return make(s, std::move(num), std::move(den));
}

}  // namespace belief_arena

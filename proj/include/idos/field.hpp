#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idos/errors.hpp"
#include "idos/rng.hpp"

namespace idos {

// Exponents of the canonical generator alpha. kNegInf is the sentinel for
// "-infinity"; alpha^kNegInf is defined to be 0.
using Exponent = std::int64_t;
inline constexpr Exponent kNegInf = std::numeric_limits<std::int64_t>::min();

using Limb = std::uint64_t;

namespace poly2 {

// Polynomials over GF(2) as little-endian bit vectors: bit i <-> coeff of x^i.

inline int words_for_bits(int bits) { return (bits + 63) / 64; }

inline bool get_bit(const std::vector<Limb>& p, int i) {
  const int w = i >> 6;
  if (w >= static_cast<int>(p.size())) return false;
  return (p[w] >> (i & 63)) & 1u;
}

inline void flip_bit(std::vector<Limb>& p, int i) {
  const int w = i >> 6;
  if (w >= static_cast<int>(p.size())) p.resize(w + 1, 0);
  p[w] ^= (Limb{1} << (i & 63));
}

inline int degree(const std::vector<Limb>& p) {
  for (int w = static_cast<int>(p.size()) - 1; w >= 0; --w) {
    if (p[w]) return w * 64 + 63 - std::countl_zero(p[w]);
  }
  return -1;  // zero polynomial
}

inline bool is_zero(const std::vector<Limb>& p) {
  return std::all_of(p.begin(), p.end(), [](Limb w) { return w == 0; });
}

// dst ^= src << shift
inline void xor_shifted(std::vector<Limb>& dst, const std::vector<Limb>& src, int shift) {
  const int word_shift = shift >> 6;
  const int bit_shift = shift & 63;
  const int need = static_cast<int>(src.size()) + word_shift + 1;
  if (static_cast<int>(dst.size()) < need) dst.resize(need, 0);
  if (bit_shift == 0) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i + word_shift] ^= src[i];
  } else {
    Limb carry = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i + word_shift] ^= (src[i] << bit_shift) | carry;
      carry = src[i] >> (64 - bit_shift);
    }
    dst[src.size() + word_shift] ^= carry;
  }
}

// a mod f, in place. `taps` are the exponents of f below deg(f); when f is
// sparse the per-bit tap path is much cheaper than limb-level xors.
inline void mod_inplace(std::vector<Limb>& a, const std::vector<Limb>& f, int fdeg,
                        const std::vector<int>& taps) {
  int adeg = degree(a);
  if (taps.size() <= 10) {
    for (int p = adeg; p >= fdeg; --p) {
      if (!get_bit(a, p)) continue;
      flip_bit(a, p);
      for (int e : taps) flip_bit(a, p - fdeg + e);
    }
  } else {
    while ((adeg = degree(a)) >= fdeg) {
      xor_shifted(a, f, adeg - fdeg);
    }
  }
  a.resize(words_for_bits(std::max(fdeg, 1)), 0);
}

// Square a (deg < fdeg) and reduce mod f.
inline std::vector<Limb> square_mod(const std::vector<Limb>& a, const std::vector<Limb>& f,
                                    int fdeg, const std::vector<int>& taps) {
  std::vector<Limb> sq(words_for_bits(2 * fdeg), 0);
  const int adeg = degree(a);
  for (int i = 0; i <= adeg; ++i) {
    if (get_bit(a, i)) flip_bit(sq, 2 * i);
  }
  mod_inplace(sq, f, fdeg, taps);
  return sq;
}

inline std::vector<Limb> gcd(std::vector<Limb> a, std::vector<Limb> b) {
  while (!is_zero(b)) {
    int da = degree(a);
    const int db = degree(b);
    while (da >= db) {
      xor_shifted(a, b, da - db);
      const int nda = degree(a);
      if (nda == da) break;  // defensive; cannot happen
      da = nda;
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace poly2

// Validates and tests irreducibility of a monic degree-d polynomial over
// GF(2), given as the set of exponents with coefficient 1. Uses the
// Frobenius-power criterion: x^(2^d) = x (mod f) and, for every prime r | d,
// gcd(x^(2^(d/r)) - x, f) = 1.
inline bool is_irreducible(const std::vector<int>& exponents, int d);

class FieldCtx;

// An element of GF(2^d): bit i of `limbs` is the coefficient of x^i in the
// residue-class representative of degree < d. Plain data; the context tag is
// only used to reject cross-field arithmetic.
struct FieldElement {
  std::vector<Limb> limbs;
  const FieldCtx* ctx = nullptr;

  bool is_zero() const { return poly2::is_zero(limbs); }
};

bool operator==(const FieldElement& a, const FieldElement& b);
inline bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

class FieldCtx {
 public:
  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;
  FieldCtx(FieldCtx&&) = default;
  FieldCtx& operator=(FieldCtx&&) = default;

  // Construct GF(2^d) with the given irreducible modulus (exponent set,
  // strictly descending, leading exponent d).
  static FieldCtx with_modulus(int d, const std::vector<int>& modulus_exponents) {
    validate_exponents(d, modulus_exponents);
    if (!is_irreducible(modulus_exponents, d)) {
      throw ProvidedModulusReducible("provided modulus is reducible over GF(2)");
    }
    return FieldCtx(d, modulus_exponents);
  }

  // Construct GF(2^d) with a modulus found by seeded random search. Sparse
  // candidates (trinomials, then pentanomials) are tried first. The search is
  // deterministic for a fixed seed.
  static FieldCtx with_random_modulus(int d, std::uint64_t seed = 1,
                                      int max_attempts = 20000) {
    if (d < 1) throw DegreeMismatch("field degree must be at least 1");
    SplitMix64 rng(derive_seed(seed, 0x6D0D));
    int attempts = 0;

    // Trinomials x^d + x^a + 1, all a in seeded-random order.
    if (d >= 2) {
      std::vector<int> mids(d - 1);
      for (int i = 0; i < d - 1; ++i) mids[i] = i + 1;
      for (int i = d - 2; i > 0; --i) {
        std::swap(mids[i], mids[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
      }
      for (int a : mids) {
        if (++attempts > max_attempts) break;
        const std::vector<int> cand{d, a, 0};
        if (is_irreducible(cand, d)) return FieldCtx(d, cand);
      }
    }

    // Pentanomials x^d + x^a + x^b + x^c + 1 with d > a > b > c > 0.
    if (d >= 4) {
      const int penta_budget = std::min(max_attempts - attempts, 4000);
      for (int i = 0; i < penta_budget; ++i) {
        ++attempts;
        int a = 1 + static_cast<int>(rng.next_below(d - 1));
        int b = 1 + static_cast<int>(rng.next_below(d - 1));
        int c = 1 + static_cast<int>(rng.next_below(d - 1));
        if (a == b || a == c || b == c) continue;
        int hi = std::max({a, b, c}), lo = std::min({a, b, c});
        int mid = a + b + c - hi - lo;
        const std::vector<int> cand{d, hi, mid, lo, 0};
        if (is_irreducible(cand, d)) return FieldCtx(d, cand);
      }
    }

    // Dense candidates: constant term 1, random interior bits.
    while (attempts < max_attempts) {
      ++attempts;
      std::vector<Limb> bits(poly2::words_for_bits(d + 1), 0);
      for (auto& w : bits) w = rng.next();
      bits[0] |= 1;  // constant term, else x divides the candidate
      std::vector<int> cand{d};
      for (int e = d - 1; e >= 0; --e) {
        if (poly2::get_bit(bits, e)) cand.push_back(e);
      }
      if (cand.size() < 2 || cand.back() != 0) continue;
      if (is_irreducible(cand, d)) return FieldCtx(d, cand);
    }
    throw SearchExhausted("no irreducible modulus found within attempt budget");
  }

  int degree() const { return d_; }
  const std::vector<int>& modulus_exponents() const { return modulus_exponents_; }

  // Two contexts are interchangeable exactly when their moduli agree.
  bool same_field(const FieldCtx& other) const {
    return d_ == other.d_ && modulus_exponents_ == other.modulus_exponents_;
  }

  FieldElement zero() const { return FieldElement{std::vector<Limb>(words_, 0), this}; }

  FieldElement one() const {
    FieldElement e = zero();
    e.limbs[0] = 1;
    return e;
  }

  // The canonical generator alpha = x (mod f). For d = 1 this reduces.
  FieldElement alpha() const {
    if (d_ == 1) {
      // x mod f: either 0 (f = x) or 1 (f = x + 1).
      return modulus_exponents_.size() == 2 ? one() : zero();
    }
    FieldElement e = zero();
    poly2::flip_bit(e.limbs, 1);
    return e;
  }

  FieldElement add(const FieldElement& a, const FieldElement& b) const {
    check_ctx(a);
    check_ctx(b);
    FieldElement r = a;
    for (int i = 0; i < words_; ++i) r.limbs[i] ^= b.limbs[i];
    r.ctx = this;
    return r;
  }

  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    check_ctx(a);
    check_ctx(b);
    FieldElement acc = zero();
    for (int i = d_ - 1; i >= 0; --i) {
      times_x_inplace(acc.limbs);
      if (poly2::get_bit(b.limbs, i)) {
        for (int w = 0; w < words_; ++w) acc.limbs[w] ^= a.limbs[w];
      }
    }
    return acc;
  }

  // Multiplicative inverse via the extended Euclidean algorithm on GF(2)[x].
  FieldElement inv(const FieldElement& a) const {
    check_ctx(a);
    if (a.is_zero()) throw DivisionByZero("inverse of zero field element");
    std::vector<Limb> r0 = modulus_limbs_;
    std::vector<Limb> r1 = a.limbs;
    std::vector<Limb> t0(1, 0), t1(1, 1);
    while (!poly2::is_zero(r1)) {
      int d0 = poly2::degree(r0);
      const int d1 = poly2::degree(r1);
      if (d0 < d1) {
        std::swap(r0, r1);
        std::swap(t0, t1);
        continue;
      }
      while (d0 >= d1 && !poly2::is_zero(r0)) {
        const int s = d0 - d1;
        poly2::xor_shifted(r0, r1, s);
        poly2::xor_shifted(t0, t1, s);
        d0 = poly2::degree(r0);
      }
      std::swap(r0, r1);
      std::swap(t0, t1);
    }
    // gcd(a, f) = r0, necessarily 1 since f is irreducible and a != 0.
    t0.resize(words_, 0);
    FieldElement r{std::move(t0), this};
    return r;
  }

  // alpha^e with alpha^(-inf) = 0 and alpha^0 = 1, by square-and-multiply.
  FieldElement pow_alpha(Exponent e) const {
    if (e == kNegInf) return zero();
    if (e < 0) throw BadParams("finite exponents must be non-negative");
    FieldElement result = one();
    FieldElement base = alpha();
    std::uint64_t n = static_cast<std::uint64_t>(e);
    while (n) {
      if (n & 1) result = mul(result, base);
      base = mul(base, base);
      n >>= 1;
    }
    return result;
  }

  FieldElement element_from_limbs(std::vector<Limb> limbs) const {
    limbs.resize(words_, 0);
    mask_top(limbs);
    return FieldElement{std::move(limbs), this};
  }

  // Uniform over the whole field (zero included).
  FieldElement random_element(SplitMix64& rng) const {
    std::vector<Limb> limbs(words_);
    for (auto& w : limbs) w = rng.next();
    mask_top(limbs);
    return FieldElement{std::move(limbs), this};
  }

  // Lowercase hex, most-significant coefficient first, exactly ceil(d/4)
  // digits, "0x" prefix.
  std::string to_hex(const FieldElement& a) const {
    check_ctx(a);
    const int digits = (d_ + 3) / 4;
    std::string s = "0x";
    s.reserve(2 + digits);
    for (int i = digits - 1; i >= 0; --i) {
      int nibble = 0;
      for (int b = 3; b >= 0; --b) {
        nibble = (nibble << 1) | (poly2::get_bit(a.limbs, 4 * i + b) ? 1 : 0);
      }
      s.push_back("0123456789abcdef"[nibble]);
    }
    return s;
  }

  FieldElement from_hex(std::string_view s) const {
    const int digits = (d_ + 3) / 4;
    if (s.size() != static_cast<std::size_t>(digits + 2) || s[0] != '0' ||
        (s[1] != 'x' && s[1] != 'X')) {
      throw ParseError("field element must be 0x followed by exactly " +
                       std::to_string(digits) + " hex digits");
    }
    FieldElement e = zero();
    for (int i = 0; i < digits; ++i) {
      const char c = s[2 + i];
      int v;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        v = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        v = c - 'A' + 10;
      } else {
        throw ParseError("invalid hex digit in field element");
      }
      const int base = 4 * (digits - 1 - i);
      for (int b = 0; b < 4; ++b) {
        if (v & (1 << b)) {
          if (base + b >= d_) throw ParseError("field element has bits beyond degree");
          poly2::flip_bit(e.limbs, base + b);
        }
      }
    }
    return e;
  }

 private:
  FieldCtx(int d, std::vector<int> exponents)
      : d_(d),
        words_(poly2::words_for_bits(d)),
        modulus_exponents_(std::move(exponents)),
        modulus_limbs_(poly2::words_for_bits(d + 1), 0) {
    for (int e : modulus_exponents_) poly2::flip_bit(modulus_limbs_, e);
    modulus_low_ = modulus_limbs_;
    poly2::flip_bit(modulus_low_, d_);
    modulus_low_.resize(words_, 0);
  }

  static void validate_exponents(int d, const std::vector<int>& exponents) {
    if (d < 1) throw DegreeMismatch("field degree must be at least 1");
    if (exponents.empty() || exponents.front() != d) {
      throw DegreeMismatch("modulus must be monic of degree exactly d");
    }
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] < 0 || (i > 0 && exponents[i] >= exponents[i - 1])) {
        throw DegreeMismatch("modulus exponents must be strictly descending and non-negative");
      }
    }
  }

  void check_ctx(const FieldElement& a) const {
    if (a.ctx == this) return;
    if (a.ctx == nullptr || !same_field(*a.ctx)) {
      throw ContextMismatch("field element belongs to a different field context");
    }
  }

  void mask_top(std::vector<Limb>& limbs) const {
    const int r = d_ & 63;
    if (r) limbs[words_ - 1] &= (Limb{1} << r) - 1;
  }

  // acc <- acc * x mod f, acc of degree < d.
  void times_x_inplace(std::vector<Limb>& acc) const {
    const bool carry = poly2::get_bit(acc, d_ - 1);
    Limb prev = 0;
    for (int w = 0; w < words_; ++w) {
      const Limb cur = acc[w];
      acc[w] = (cur << 1) | prev;
      prev = cur >> 63;
    }
    mask_top(acc);
    if (carry) {
      for (int w = 0; w < words_; ++w) acc[w] ^= modulus_low_[w];
    }
  }

  int d_;
  int words_;
  std::vector<int> modulus_exponents_;  // descending, includes d and (for irreducible f) 0
  std::vector<Limb> modulus_limbs_;
  std::vector<Limb> modulus_low_;  // modulus with the x^d term removed

  friend bool operator==(const FieldElement&, const FieldElement&);
};

inline bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.ctx == nullptr || b.ctx == nullptr) return a.ctx == b.ctx && a.limbs == b.limbs;
  return a.ctx->same_field(*b.ctx) && a.limbs == b.limbs;
}

inline bool is_irreducible(const std::vector<int>& exponents, int d) {
  if (d < 1) return false;
  if (exponents.empty() || exponents.front() != d) return false;

  std::vector<Limb> f(poly2::words_for_bits(d + 1), 0);
  std::vector<int> taps;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || (i > 0 && exponents[i] >= exponents[i - 1])) return false;
    poly2::flip_bit(f, exponents[i]);
    if (exponents[i] != d) taps.push_back(exponents[i]);
  }

  // x reduced mod f (only differs from x when d = 1).
  std::vector<Limb> x_red(poly2::words_for_bits(std::max(d, 2)), 0);
  poly2::flip_bit(x_red, 1);
  poly2::mod_inplace(x_red, f, d, taps);

  // Prime divisors of d, for the proper-subfield checks.
  std::vector<int> primes;
  {
    int n = d;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        primes.push_back(p);
        while (n % p == 0) n /= p;
      }
    }
    if (n > 1) primes.push_back(n);
  }
  std::vector<int> checkpoints;
  for (int p : primes) checkpoints.push_back(d / p);
  std::sort(checkpoints.begin(), checkpoints.end());

  std::vector<Limb> t = x_red;
  std::size_t next_cp = 0;
  std::vector<std::vector<Limb>> cp_values;
  for (int i = 1; i <= d; ++i) {
    t = poly2::square_mod(t, f, d, taps);
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == i) {
      cp_values.push_back(t);
      ++next_cp;
    }
  }
  t.resize(x_red.size(), 0);
  if (!(t == x_red)) return false;

  for (auto& u : cp_values) {
    u.resize(std::max(u.size(), x_red.size()), 0);
    for (std::size_t w = 0; w < x_red.size(); ++w) u[w] ^= x_red[w];
    std::vector<Limb> g = poly2::gcd(u, f);
    if (poly2::degree(g) != 0) return false;
  }
  return true;
}

}  // namespace idos

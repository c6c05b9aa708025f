#pragma once

#include "hmfq/rational.hpp"

namespace hmfq {

// Truncated p-adic integers: residues mod p^M at fixed precision M.
// Arithmetic never changes the precision; mixing precisions is an error.
class PAdic {
 public:
  PAdic() : p_(0), prec_(0), mod_(1), v_(0) {}
  PAdic(long long p, int prec, int128 value) : p_(p), prec_(prec), mod_(pow_ll(p, prec)) {
    v_ = value % mod_;
    if (v_ < 0) v_ += mod_;
  }

  static PAdic from_rational(const Rational& r, long long p, int prec) {
    int128 mod = pow_ll(p, prec);
    int128 den = r.den() % mod;
    if (den % p == 0)
      throw arithmetic_error("rational " + r.str() + " is not p-integral at p=" +
                             std::to_string(p));
    return PAdic(p, prec, mulmod(r.num() % mod, inv_mod(den, mod, p), mod));
  }

  long long p() const { return p_; }
  int precision() const { return prec_; }
  int128 modulus() const { return mod_; }
  int128 residue() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_unit() const { check(); return v_ % p_ != 0; }

  friend PAdic operator+(const PAdic& a, const PAdic& b) {
    a.match(b);
    int128 s = a.v_ + b.v_;
    if (s >= a.mod_) s -= a.mod_;
    return raw(a, s);
  }
  friend PAdic operator-(const PAdic& a, const PAdic& b) {
    a.match(b);
    int128 s = a.v_ - b.v_;
    if (s < 0) s += a.mod_;
    return raw(a, s);
  }
  friend PAdic operator*(const PAdic& a, const PAdic& b) {
    a.match(b);
    return raw(a, mulmod(a.v_, b.v_, a.mod_));
  }
  PAdic operator-() const { return raw(*this, v_ == 0 ? 0 : mod_ - v_); }
  PAdic& operator+=(const PAdic& o) { return *this = *this + o; }
  PAdic& operator-=(const PAdic& o) { return *this = *this - o; }
  PAdic& operator*=(const PAdic& o) { return *this = *this * o; }

  PAdic inverse() const {
    check();
    if (v_ % p_ == 0) throw arithmetic_error("p-adic non-unit has no inverse");
    return raw(*this, inv_mod(v_, mod_, p_));
  }

  PAdic pow(long long e) const {
    PAdic r(p_, prec_, 1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  int valuation() const {
    check();
    if (v_ == 0) return prec_;  // >= prec, truncation floor
    int t = 0;
    int128 x = v_;
    while (x % p_ == 0) { x /= p_; ++t; }
    return t;
  }

  friend bool operator==(const PAdic& a, const PAdic& b) {
    a.match(b);
    return a.v_ == b.v_;
  }

  std::string str() const { return to_string_i128(v_) + " mod " + std::to_string(p_) + "^" + std::to_string(prec_); }

  static int128 pow_ll(long long p, int e) {
    int128 r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, p);
    return r;
  }

 private:
  static PAdic raw(const PAdic& like, int128 v) {
    PAdic r;
    r.p_ = like.p_;
    r.prec_ = like.prec_;
    r.mod_ = like.mod_;
    r.v_ = v;
    return r;
  }
  void check() const {
    if (p_ == 0) throw arithmetic_error("uninitialized p-adic value");
  }
  void match(const PAdic& o) const {
    check();
    o.check();
    if (p_ != o.p_ || prec_ != o.prec_)
      throw arithmetic_error("p-adic precision/prime mismatch");
  }
  static int128 mulmod(int128 a, int128 b, int128 m) {
    // moduli stay below ~2^60 in practice, so 128-bit products are safe,
    // but keep the checked multiply as a guard
    return ((checked_mul(a % m, b % m)) % m + m) % m;
  }
  static int128 inv_mod(int128 a, int128 m, long long p) {
    a %= m;
    if (a < 0) a += m;
    if (a % p == 0) throw arithmetic_error("not invertible mod p^M");
    // extended Euclid
    int128 g0 = m, g1 = a, x0 = 0, x1 = 1;
    while (g1) {
      int128 q = g0 / g1;
      int128 t = g0 - q * g1;
      g0 = g1;
      g1 = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    x0 %= m;
    if (x0 < 0) x0 += m;
    return x0;
  }

  long long p_;
  int prec_;
  int128 mod_;
  int128 v_;
};

}  // namespace hmfq

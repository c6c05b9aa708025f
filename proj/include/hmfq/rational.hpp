#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hmfq {

// All core arithmetic is exact.  Overflow of the 128-bit backing type is a
// hard error, never silent wraparound.
struct overflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct arithmetic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using int128 = __int128;

inline int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("int128 add overflow");
  return r;
}

inline int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("int128 sub overflow");
  return r;
}

inline int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("int128 mul overflow");
  return r;
}

inline int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_string_i128(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // -2^127 cannot be negated; it never appears for reduced values in range.
  unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

inline int128 parse_i128(const std::string& s) {
  if (s.empty()) throw arithmetic_error("empty integer literal");
  size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw arithmetic_error("bad integer literal: " + s);
  int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw arithmetic_error("bad integer literal: " + s);
    v = checked_add(checked_mul(v, 10), s[i] - '0');
  }
  return neg ? -v : v;
}

// Exact rational with reduced representation, positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(int n) : num_(n), den_(1) {}
  Rational(int128 n, int128 d) : num_(n), den_(d) { reduce(); }

  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_i128(s), 1);
    return Rational(parse_i128(s.substr(0, slash)), parse_i128(s.substr(slash + 1)));
  }

  int128 num() const { return num_; }
  int128 den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  Rational operator-() const { return raw(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    int128 g = gcd128(a.den_, b.den_);
    int128 da = a.den_ / g;
    int128 db = b.den_ / g;
    return Rational(checked_add(checked_mul(a.num_, db), checked_mul(b.num_, da)),
                    checked_mul(checked_mul(da, g), db));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    int128 g1 = gcd128(a.num_, b.den_);
    int128 g2 = gcd128(b.num_, a.den_);
    return raw(checked_mul(a.num_ / g1, b.num_ / g2),
               checked_mul(a.den_ / g2, b.den_ / g1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw arithmetic_error("rational division by zero");
    return a * raw(b.den_ < 0 ? -b.den_ : b.den_,
                   b.den_ < 0 ? -b.num_ : b.num_)
               .fix_sign();
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // a/b < c/d  <=>  ad < cb  (positive denominators)
    int128 l = checked_mul(a.num_, b.den_);
    int128 r = checked_mul(b.num_, a.den_);
    return l <=> r;
  }

  // Integer part check and extraction.
  int128 as_integer() const {
    if (den_ != 1) throw arithmetic_error("rational " + str() + " is not an integer");
    return num_;
  }

  Rational pow(int e) const {
    if (e < 0) return Rational(1) / pow(-e);
    Rational r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b = (e > 1) ? b * b : b;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    if (den_ == 1) return to_string_i128(num_);
    return to_string_i128(num_) + "/" + to_string_i128(den_);
  }

 private:
  static Rational raw(int128 n, int128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  Rational fix_sign() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    return *this;
  }
  void reduce() {
    if (den_ == 0) throw arithmetic_error("zero denominator");
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    int128 g = gcd128(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  int128 num_;
  int128 den_;
};

// Valuation of a nonzero rational at a rational prime.
inline int val_p(const Rational& x, long long p) {
  if (x.is_zero()) throw arithmetic_error("valuation of zero");
  int v = 0;
  int128 n = x.num();
  if (n < 0) n = -n;
  while (n % p == 0) { n /= p; ++v; }
  int128 d = x.den();
  while (d % p == 0) { d /= p; --v; }
  return v;
}

}  // namespace hmfq

#pragma once

#include <map>
#include <vector>

#include "hmfq/rational.hpp"

namespace hmfq {

// Elements of Q(zeta_m), stored on the power basis 1, zeta, ..., zeta^{phi(m)-1}
// after reduction modulo the m-th cyclotomic polynomial.  Equality of reduced
// coordinate vectors is exact equality in the field.
class Cyclotomic {
 public:
  Cyclotomic() : order_(1), coords_(1, Rational(0)) {}
  explicit Cyclotomic(const Rational& r, int order = 1)
      : order_(order), coords_(deg(order), Rational(0)) {
    coords_[0] = r;
  }

  // zeta_m^k
  static Cyclotomic root_of_unity(int k, int m) {
    Cyclotomic c;
    c.order_ = m;
    c.coords_.assign(deg(m), Rational(0));
    std::vector<Rational> raw(m, Rational(0));
    k %= m;
    if (k < 0) k += m;
    raw[k] = Rational(1);
    c.coords_ = reduce(raw, m);
    return c;
  }

  int order() const { return order_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const {
    for (auto& c : coords_)
      if (!c.is_zero()) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < coords_.size(); ++i)
      if (!coords_[i].is_zero()) return false;
    return true;
  }
  Rational rational_part() const {
    if (!is_rational()) throw arithmetic_error("cyclotomic value is not rational");
    return coords_[0];
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = to_common(a, b);
    for (size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] += y.coords_[i];
    return x;
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = to_common(a, b);
    for (size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] -= y.coords_[i];
    return x;
  }
  Cyclotomic operator-() const {
    Cyclotomic r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = to_common(a, b);
    int m = x.order_;
    std::vector<Rational> raw(2 * deg(m), Rational(0));
    for (size_t i = 0; i < x.coords_.size(); ++i) {
      if (x.coords_[i].is_zero()) continue;
      for (size_t j = 0; j < y.coords_.size(); ++j) {
        if (y.coords_[j].is_zero()) continue;
        raw[i + j] += x.coords_[i] * y.coords_[j];
      }
    }
    Cyclotomic r;
    r.order_ = m;
    r.coords_ = reduce(raw, m);
    return r;
  }
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = to_common(a, b);
    return x.coords_ == y.coords_;
  }

  // Complex conjugation: zeta -> zeta^{-1}.
  Cyclotomic conj() const {
    std::vector<Rational> raw(order_, Rational(0));
    std::vector<Rational> self(order_, Rational(0));
    // re-express on zeta^0..zeta^{m-1} (coords already reduced, deg < phi(m) <= m)
    for (size_t i = 0; i < coords_.size(); ++i) self[i] = coords_[i];
    for (int i = 0; i < order_; ++i) {
      int j = (order_ - i) % order_;
      raw[j] += self[i];
    }
    Cyclotomic r;
    r.order_ = order_;
    r.coords_ = reduce(raw, order_);
    return r;
  }

  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ",";
      s += coords_[i].str();
    }
    return s + "]@z" + std::to_string(order_);
  }

  // m-th cyclotomic polynomial, integer coefficients, computed by the
  // recursion x^m - 1 = prod_{d | m} Phi_d(x).
  static const std::vector<Rational>& cyclotomic_poly(int m);

 private:
  static size_t deg(int m) { return cyclotomic_poly(m).size() - 1; }

  static std::vector<Rational> reduce(std::vector<Rational> raw, int m) {
    const auto& phi = cyclotomic_poly(m);
    size_t d = phi.size() - 1;
    // divide by monic phi
    for (size_t i = raw.size(); i-- > d;) {
      if (raw[i].is_zero()) continue;
      Rational c = raw[i];
      for (size_t j = 0; j <= d; ++j) raw[i - d + j] -= c * phi[j];
    }
    raw.resize(d);
    return raw;
  }

  static std::pair<Cyclotomic, Cyclotomic> to_common(const Cyclotomic& a,
                                                     const Cyclotomic& b) {
    if (a.order_ == b.order_) return {a, b};
    int m = std::lcm(a.order_, b.order_);
    return {a.promote(m), b.promote(m)};
  }

  Cyclotomic promote(int m) const {
    if (m == order_) return *this;
    int k = m / order_;
    std::vector<Rational> raw(m, Rational(0));
    for (size_t i = 0; i < coords_.size(); ++i) raw[i * k] = coords_[i];
    Cyclotomic r;
    r.order_ = m;
    r.coords_ = reduce(raw, m);
    return r;
  }

  int order_;
  std::vector<Rational> coords_;
};

inline const std::vector<Rational>& Cyclotomic::cyclotomic_poly(int m) {
  static std::map<int, std::vector<Rational>> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, by repeated exact division.
  std::vector<Rational> num(m + 1, Rational(0));
  num[0] = Rational(-1);
  num[m] = Rational(1);
  for (int d = 1; d < m; ++d) {
    if (m % d) continue;
    const auto& phid = cyclotomic_poly(d);
    // divide num by phid (both monic up to sign; phid monic)
    std::vector<Rational> q(num.size() - phid.size() + 1, Rational(0));
    std::vector<Rational> rem = num;
    for (size_t i = rem.size(); i-- >= phid.size() && i + 1 >= phid.size();) {
      if (i + 1 < phid.size()) break;
      Rational c = rem[i];
      if (c.is_zero()) continue;
      size_t off = i - (phid.size() - 1);
      q[off] = c;
      for (size_t j = 0; j < phid.size(); ++j) rem[off + j] -= c * phid[j];
    }
    num = q;
  }
  return cache.emplace(m, std::move(num)).first->second;
}

}  // namespace hmfq

#pragma once

#include <map>

#include "hmfq/rational.hpp"

namespace hmfq {

// Exact vectors in the Q-span of formal symbols log(l), one per rational
// prime l.  This is the coefficient module in which the derivative kernel
// lives: log|q_v|_oo = f_v * log(l_v) for a prime q_v of residue degree f_v.
// Addition and rational scaling only; two FormalLog values cannot be
// multiplied.
class FormalLog {
 public:
  FormalLog() = default;

  static FormalLog basis(long long rational_prime, const Rational& c = Rational(1)) {
    FormalLog f;
    if (!c.is_zero()) f.coeffs_[rational_prime] = c;
    return f;
  }

  const std::map<long long, Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Rational coeff(long long p) const {
    auto it = coeffs_.find(p);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  friend FormalLog operator+(const FormalLog& a, const FormalLog& b) {
    FormalLog r = a;
    for (auto& [p, c] : b.coeffs_) {
      auto it = r.coeffs_.find(p);
      if (it == r.coeffs_.end())
        r.coeffs_.emplace(p, c);
      else {
        it->second += c;
        if (it->second.is_zero()) r.coeffs_.erase(it);
      }
    }
    return r;
  }
  FormalLog operator-() const {
    FormalLog r = *this;
    for (auto& [p, c] : r.coeffs_) c = -c;
    return r;
  }
  friend FormalLog operator-(const FormalLog& a, const FormalLog& b) { return a + (-b); }
  friend FormalLog operator*(const Rational& s, const FormalLog& a) {
    FormalLog r;
    if (s.is_zero()) return r;
    for (auto& [p, c] : a.coeffs_) r.coeffs_.emplace(p, s * c);
    return r;
  }
  FormalLog& operator+=(const FormalLog& o) { return *this = *this + o; }
  FormalLog& operator-=(const FormalLog& o) { return *this = *this - o; }

  friend bool operator==(const FormalLog& a, const FormalLog& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string str() const {
    if (coeffs_.empty()) return "{}";
    std::string s = "{";
    bool first = true;
    for (auto& [p, c] : coeffs_) {
      if (!first) s += ",";
      first = false;
      s += "\"log_" + std::to_string(p) + "\":\"" + c.str() + "\"";
    }
    return s + "}";
  }

 private:
  std::map<long long, Rational> coeffs_;
};

}  // namespace hmfq

#pragma once

#include <variant>

#include "hmfq/cyclotomic.hpp"
#include "hmfq/formal_log.hpp"
#include "hmfq/padic.hpp"
#include "hmfq/rational.hpp"

namespace hmfq {

// Tagged exact scalar.  Ring operations stay within a tag; the only implicit
// promotion is Rational into any other tag.  FormalLog values form a module
// over Rational: adding two FormalLog values and scaling by Rational is
// allowed, multiplying two FormalLog values is an error.
class Coefficient {
 public:
  enum class Tag { Rational, Cyclotomic, FormalLog, PAdic };

  Coefficient() : v_(Rational(0)) {}
  Coefficient(const Rational& r) : v_(r) {}
  Coefficient(long long n) : v_(Rational(n)) {}
  Coefficient(const Cyclotomic& c) : v_(c) {}
  Coefficient(const FormalLog& f) : v_(f) {}
  Coefficient(const PAdic& p) : v_(p) {}

  Tag tag() const { return Tag(v_.index()); }
  bool is_rational() const { return tag() == Tag::Rational; }

  const Rational& rat() const {
    if (!is_rational()) throw arithmetic_error("coefficient is not rational");
    return std::get<Rational>(v_);
  }
  const Cyclotomic& cyc() const { return std::get<Cyclotomic>(v_); }
  const FormalLog& flog() const { return std::get<FormalLog>(v_); }
  const PAdic& padic() const { return std::get<PAdic>(v_); }

  bool is_zero() const {
    switch (tag()) {
      case Tag::Rational: return rat().is_zero();
      case Tag::Cyclotomic: return cyc().is_zero();
      case Tag::FormalLog: return flog().is_zero();
      case Tag::PAdic: return padic().is_zero();
    }
    return false;
  }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    auto [x, y] = promote(a, b);
    switch (x.tag()) {
      case Tag::Rational: return Coefficient(x.rat() + y.rat());
      case Tag::Cyclotomic: return Coefficient(x.cyc() + y.cyc());
      case Tag::FormalLog: return Coefficient(x.flog() + y.flog());
      case Tag::PAdic: return Coefficient(x.padic() + y.padic());
    }
    throw arithmetic_error("bad tag");
  }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    return a + (-b);
  }
  Coefficient operator-() const {
    switch (tag()) {
      case Tag::Rational: return Coefficient(-rat());
      case Tag::Cyclotomic: return Coefficient(-cyc());
      case Tag::FormalLog: return Coefficient(-flog());
      case Tag::PAdic: return Coefficient(-padic());
    }
    throw arithmetic_error("bad tag");
  }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    // FormalLog * Rational is module scaling; FormalLog * FormalLog is illegal.
    if (a.tag() == Tag::FormalLog && b.tag() == Tag::FormalLog)
      throw arithmetic_error("cannot multiply two formal-log values");
    if (a.tag() == Tag::FormalLog) return Coefficient(b.expect_rational_scalar() * a.flog());
    if (b.tag() == Tag::FormalLog) return Coefficient(a.expect_rational_scalar() * b.flog());
    auto [x, y] = promote(a, b);
    switch (x.tag()) {
      case Tag::Rational: return Coefficient(x.rat() * y.rat());
      case Tag::Cyclotomic: return Coefficient(x.cyc() * y.cyc());
      case Tag::PAdic: return Coefficient(x.padic() * y.padic());
      default: throw arithmetic_error("bad tag");
    }
  }
  Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
  Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    if (a.tag() != b.tag()) {
      auto [x, y] = promote(a, b);
      return x == y;
    }
    return a.v_ == b.v_;
  }

  std::string str() const {
    switch (tag()) {
      case Tag::Rational: return rat().str();
      case Tag::Cyclotomic: return cyc().str();
      case Tag::FormalLog: return flog().str();
      case Tag::PAdic: return padic().str();
    }
    return "?";
  }

  // PAdic reduction of Rational-tagged expansions.
  PAdic to_padic(long long p, int prec) const {
    if (tag() == Tag::PAdic) return padic();
    return PAdic::from_rational(rat(), p, prec);
  }

 private:
  Rational expect_rational_scalar() const {
    if (tag() != Tag::Rational)
      throw arithmetic_error("formal-log values admit only rational scalars");
    return rat();
  }

  static std::pair<Coefficient, Coefficient> promote(const Coefficient& a,
                                                     const Coefficient& b) {
    if (a.tag() == b.tag()) return {a, b};
    if (a.tag() == Tag::Rational) return {b.embed_rational(a), b};
    if (b.tag() == Tag::Rational) return {a, a.embed_rational(b)};
    throw arithmetic_error("mixed-tag coefficient arithmetic");
  }
  Coefficient embed_rational(const Coefficient& r) const {
    switch (tag()) {
      case Tag::Cyclotomic: return Coefficient(Cyclotomic(r.rat(), cyc().order()));
      case Tag::FormalLog:
        if (r.rat().is_zero()) return Coefficient(FormalLog());
        throw arithmetic_error("nonzero rational cannot be added to a formal-log value");
      case Tag::PAdic:
        return Coefficient(PAdic::from_rational(r.rat(), padic().p(), padic().precision()));
      default: return r;
    }
  }

  std::variant<Rational, Cyclotomic, FormalLog, PAdic> v_;
};

}  // namespace hmfq

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmfq/rational.hpp"

namespace hmfq {

struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FieldKind { Rational, RealQuadratic };

// Field element a + b*sqrt(d).  Over Q the coordinate b is identically zero.
struct Elem {
  Rational a, b;
  Elem() = default;
  Elem(Rational x) : a(std::move(x)), b(0) {}
  Elem(Rational x, Rational y) : a(std::move(x)), b(std::move(y)) {}
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  friend bool operator==(const Elem& x, const Elem& y) = default;
  std::string str() const {
    if (b.is_zero()) return a.str();
    return a.str() + (b.sign() >= 0 ? "+" : "") + b.str() + "*sqrt(d)";
  }
};

enum class SplitType { Split, Inert, Ramified };

struct PrimeF {
  int id = -1;
  long long ell = 0;   // residue characteristic
  int f = 1;           // residue degree
  int e = 1;           // ramification index
  long long norm = 0;  // ell^f
  int which = 0;       // distinguishes the two primes over a split ell
  int conj_id = -1;    // id of the conjugate prime (split), else own id
  Elem gen;            // principal generator, |N(gen)| = norm
  long long r_omega = 0;  // image of omega in the residue field (f = 1 only)
};

// Ideals in factored form: sorted (prime id, exponent) with nonzero exponents.
// Integral ideals have all exponents >= 0; the empty vector is the ring O.
class IdealF {
 public:
  IdealF() = default;
  static IdealF one() { return IdealF(); }
  static IdealF prime(int id, int e = 1) {
    IdealF I;
    if (e != 0) I.e_.push_back({id, e});
    return I;
  }

  const std::vector<std::pair<int, int>>& exps() const { return e_; }
  bool is_one() const { return e_.empty(); }
  bool is_integral() const {
    for (auto& [p, e] : e_)
      if (e < 0) return false;
    return true;
  }
  int ord(int prime_id) const {
    for (auto& [p, e] : e_)
      if (p == prime_id) return e;
    return 0;
  }

  friend IdealF operator*(const IdealF& A, const IdealF& B) {
    IdealF r;
    size_t i = 0, j = 0;
    while (i < A.e_.size() || j < B.e_.size()) {
      if (j == B.e_.size() || (i < A.e_.size() && A.e_[i].first < B.e_[j].first))
        r.e_.push_back(A.e_[i++]);
      else if (i == A.e_.size() || B.e_[j].first < A.e_[i].first)
        r.e_.push_back(B.e_[j++]);
      else {
        int e = A.e_[i].second + B.e_[j].second;
        if (e != 0) r.e_.push_back({A.e_[i].first, e});
        ++i, ++j;
      }
    }
    return r;
  }
  IdealF inverse() const {
    IdealF r = *this;
    for (auto& [p, e] : r.e_) e = -e;
    return r;
  }
  friend IdealF operator/(const IdealF& A, const IdealF& B) { return A * B.inverse(); }

  IdealF pow(int k) const {
    IdealF r = *this;
    if (k == 0) return IdealF();
    for (auto& [p, e] : r.e_) e *= k;
    return r;
  }

  // gcd of integral ideals (exponent-wise min).
  friend IdealF gcd(const IdealF& A, const IdealF& B) {
    IdealF r;
    size_t i = 0, j = 0;
    while (i < A.e_.size() && j < B.e_.size()) {
      if (A.e_[i].first < B.e_[j].first)
        ++i;
      else if (B.e_[j].first < A.e_[i].first)
        ++j;
      else {
        int e = std::min(A.e_[i].second, B.e_[j].second);
        if (e != 0) r.e_.push_back({A.e_[i].first, e});
        ++i, ++j;
      }
    }
    return r;
  }

  // B | A for integral ideals.
  friend bool divides(const IdealF& B, const IdealF& A) { return (A / B).is_integral(); }
  bool coprime(const IdealF& B) const { return gcd(*this, B).is_one(); }

  friend bool operator==(const IdealF& A, const IdealF& B) = default;
  friend bool operator<(const IdealF& A, const IdealF& B) { return A.e_ < B.e_; }

  std::string str() const {
    if (e_.empty()) return "(1)";
    std::string s;
    for (auto& [p, e] : e_) {
      if (!s.empty()) s += "*";
      s += "P" + std::to_string(p);
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

 private:
  std::vector<std::pair<int, int>> e_;
};

// alpha + beta = 1 with both totally positive, or a flagged boundary pair.
struct ConvexCombination {
  Elem alpha, beta;
  bool boundary = false;  // (alpha,beta) = (0,1) or (1,0)
};

// A totally real base field of narrow class number one: Q, or a supported
// real quadratic field Q(sqrt d).  Immutable after construction; all
// operations are pure.
class BaseField {
 public:
  static BaseField rationals(long long prime_bound);
  static BaseField real_quadratic(long long d, long long prime_bound);

  FieldKind kind() const { return kind_; }
  long long d() const { return d_; }
  int degree() const { return kind_ == FieldKind::Rational ? 1 : 2; }
  long long discriminant() const { return disc_; }
  long long prime_bound() const { return prime_bound_; }
  const Elem& fundamental_unit() const { return fund_unit_; }
  int narrow_class_number() const { return 1; }

  // --- element arithmetic -------------------------------------------------
  Elem add(const Elem& x, const Elem& y) const { return {x.a + y.a, x.b + y.b}; }
  Elem sub(const Elem& x, const Elem& y) const { return {x.a - y.a, x.b - y.b}; }
  Elem neg(const Elem& x) const { return {-x.a, -x.b}; }
  Elem mul(const Elem& x, const Elem& y) const {
    return {x.a * y.a + Rational(d_) * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  Elem conj(const Elem& x) const { return {x.a, -x.b}; }
  Rational norm(const Elem& x) const { return x.a * x.a - Rational(d_) * x.b * x.b; }
  Rational trace(const Elem& x) const { return x.a + x.a; }
  Elem inv(const Elem& x) const {
    Rational n = norm(x);
    if (n.is_zero()) throw arithmetic_error("division by zero element");
    return {x.a / n, -x.b / n};
  }
  Elem div(const Elem& x, const Elem& y) const { return mul(x, inv(y)); }
  Elem from_rational(const Rational& r) const { return Elem(r); }
  // omega: 1 for Q, sqrt(d) or (1+sqrt(d))/2 for real quadratic fields.
  Elem omega() const;

  // exact sign of x under the embedding sending sqrt(d) to +sqrt(d) (which=0)
  // or -sqrt(d) (which=1); integer arithmetic only
  int sign_embedding(const Elem& x, int which) const;
  bool totally_positive(const Elem& x) const;
  bool is_integral(const Elem& x) const;

  // --- primes and ideals ----------------------------------------------------
  const std::vector<PrimeF>& primes() const { return primes_; }
  const PrimeF& prime(int id) const { return primes_.at(id); }
  std::vector<int> primes_above(long long ell) const;
  // all primes of norm <= bound (bound <= prime_bound)
  std::vector<PrimeF> primes_up_to(long long bound) const;

  int val(const Elem& x, const PrimeF& P) const;
  IdealF ideal_of(const Elem& x) const;
  IdealF ideal_of_integer(long long n) const { return ideal_of(Elem(Rational(n))); }

  Rational ideal_norm(const IdealF& I) const;
  long long ideal_norm_ll(const IdealF& I) const;
  Elem generator(const IdealF& I) const;
  Elem totally_positive_generator(const IdealF& I) const;

  std::vector<IdealF> divisors(const IdealF& I) const;

  // Integral ideals are enumerated once into a master list in canonical order
  // (norm ascending, then exponent vectors lexicographically by prime id).
  // Ideals of norm <= bound always form a prefix of that list, so dense
  // expansions of different bounds share global indices.
  void ensure_ideals(long long bound) const;
  long long ideal_count(long long bound) const;
  const IdealF& ideal_at(long long i) const { return ideal_list_[i]; }
  // global index of an enumerated ideal; throws if it was never enumerated
  // (truncation discipline)
  long long ideal_index(const IdealF& I) const;
  bool canonical_less(const IdealF& A, const IdealF& B) const;

  // all alpha in I^{-1} with alpha, 1-alpha totally positive (I integral)
  std::vector<ConvexCombination> convex_lattice_points(const IdealF& I,
                                                       bool include_boundary) const;

  // reduction of a P-unit x into the residue field; f=1 primes give a value
  // in F_ell, f=2 primes a pair (c0, c1) meaning c0 + c1*sbar with sbar the
  // reduction of sqrt(d)
  std::pair<long long, long long> reduce_mod(const Elem& x, const PrimeF& P) const;

  std::string describe() const;

 private:
  BaseField() = default;
  void build_prime_table();
  void add_primes_over(long long ell);
  Elem find_generator_of_norm(long long ell, int want_val_p0, const PrimeF* P) const;
  void ensure_h_plus_one() const;

  FieldKind kind_ = FieldKind::Rational;
  long long d_ = 0;
  long long disc_ = 1;
  long long prime_bound_ = 0;
  Elem fund_unit_{Rational(1)};
  std::vector<PrimeF> primes_;
  mutable std::vector<IdealF> ideal_list_;     // master list, norms <= list_bound_
  mutable std::vector<long long> ideal_norms_;
  mutable long long list_bound_ = 0;
  mutable std::vector<std::pair<IdealF, long long>> ideal_index_;  // sorted by IdealF
};

// kronecker symbol (a | n)
int kronecker(long long a, long long n);

}  // namespace hmfq

#pragma once

#include <map>
#include <memory>
#include <set>

#include "hmfq/basefield.hpp"
#include "hmfq/coefficient.hpp"

namespace hmfq {

// --- binary quadratic forms (class group backend for imaginary quadratic E/Q)

struct BQForm {
  long long a = 1, b = 0, c = 0;
  friend bool operator==(const BQForm&, const BQForm&) = default;
  friend bool operator<(const BQForm& x, const BQForm& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  }
  long long disc() const { return b * b - 4 * a * c; }
  std::string str() const {
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
  }
};

BQForm reduce_form(BQForm f);
BQForm compose_forms(const BQForm& f, const BQForm& g);
std::vector<BQForm> reduced_forms(long long disc);

// Class group of an imaginary quadratic field, realized on reduced forms.
class ClassGroupE {
 public:
  explicit ClassGroupE(long long disc);
  long long disc() const { return disc_; }
  int order() const { return (int)forms_.size(); }
  const std::vector<BQForm>& elements() const { return forms_; }
  int index_of(const BQForm& f) const;
  int identity() const { return id_; }
  int compose(int i, int j) const { return table_[i][j]; }
  int inverse(int i) const;
  int element_order(int i) const;

 private:
  long long disc_;
  std::vector<BQForm> forms_;
  std::vector<std::vector<int>> table_;
  int id_;
};

// Ideals of O_E in factored form.  E-primes are indexed by the F-prime below
// plus a conjugate slot: (below_id, 0) and (below_id, 1), the latter only for
// split primes.
struct EPrimeKey {
  int below;
  int slot;
  friend bool operator==(const EPrimeKey&, const EPrimeKey&) = default;
  friend bool operator<(const EPrimeKey& x, const EPrimeKey& y) {
    return std::tie(x.below, x.slot) < std::tie(y.below, y.slot);
  }
};

class EIdeal {
 public:
  EIdeal() = default;
  static EIdeal prime(EPrimeKey k, int e = 1) {
    EIdeal I;
    if (e) I.e_[k] = e;
    return I;
  }
  const std::map<EPrimeKey, int>& exps() const { return e_; }
  bool is_one() const { return e_.empty(); }
  friend EIdeal operator*(const EIdeal& A, const EIdeal& B) {
    EIdeal r = A;
    for (auto& [k, e] : B.e_) {
      r.e_[k] += e;
      if (r.e_[k] == 0) r.e_.erase(k);
    }
    return r;
  }
  EIdeal inverse() const {
    EIdeal r = *this;
    for (auto& [k, e] : r.e_) e = -e;
    return r;
  }
  friend EIdeal operator/(const EIdeal& A, const EIdeal& B) { return A * B.inverse(); }
  friend bool operator==(const EIdeal&, const EIdeal&) = default;
  std::string str() const;

 private:
  std::map<EPrimeKey, int> e_;
};

// Finite-order Hecke character of E.  The modulus is encoded by its support
// below: an E-ideal touching any E-prime above a listed F-prime evaluates to
// zero.  Class-group values are available on the F = Q backend only.
class CMExtension;
class EHeckeCharacter {
 public:
  // trivial character with the given modulus support
  static EHeckeCharacter trivial(std::vector<int> modulus_support_below);
  // class-group character determined by a value zeta_m^k on a chosen
  // generator of a cyclic class group (F = Q backend)
  static EHeckeCharacter cyclic_class_character(const CMExtension& E, const BQForm& gen,
                                                int k, int m,
                                                std::vector<int> modulus_support_below);

  bool is_class_character() const { return !values_.empty(); }
  int value_order() const { return order_; }
  const std::vector<int>& modulus_support() const { return modulus_support_; }

  // chi_[modulus](J): 0 on non-coprime ideals, multiplicative otherwise
  Coefficient eval(const CMExtension& E, const EIdeal& J) const;

 private:
  std::vector<int> modulus_support_;     // F-prime ids under the modulus
  std::map<int, Coefficient> values_;    // class index -> root of unity
  int order_ = 1;
};

// The totally imaginary quadratic extension E = F(sqrt(delta)).
class CMExtension {
 public:
  // delta: totally negative integral element whose ramified primes all have
  // odd residue characteristic (checked)
  CMExtension(std::shared_ptr<const BaseField> F, Elem delta);

  const BaseField& F() const { return *F_; }
  std::shared_ptr<const BaseField> F_ptr() const { return F_; }
  const Elem& delta() const { return delta_; }
  const IdealF& rel_discriminant() const { return D_; }

  SplitType splitting_type(const PrimeF& P) const;
  SplitType splitting_type(int prime_id) const { return splitting_type(F_->prime(prime_id)); }
  int epsilon(const PrimeF& P) const;  // +1 split, -1 inert, 0 ramified
  // eps_[D] on ideals of F: multiplicative, zero on ideals not prime to D
  int epsilon_ideal(const IdealF& I) const;

  // r(I): number of ideals of O_E with relative norm I (I integral)
  long long r_count(const IdealF& I) const;
  // the same, restricted to ideals coprime to every E-prime above the listed
  // F-primes
  long long r_count_coprime(const IdealF& I, const std::vector<int>& avoid_below) const;
  std::vector<EIdeal> list_ideals_of_norm(const IdealF& I) const;

  IdealF relative_norm(const EIdeal& J) const;
  // extension of an ideal of F to O_E
  EIdeal extend(const IdealF& I) const;
  // Delta_1: the square root of D1 * O_E (D1 | D squarefree)
  EIdeal sqrt_of_extended(const IdealF& D1) const;

  // local quadratic character at a ramified prime v, unit arguments only
  int local_eps(const PrimeF& v, const Elem& x) const;
  // full local character for arbitrary nonzero arguments (tame symbol with
  // the ramified element delta)
  int local_eps_full(const PrimeF& v, const Elem& x) const;

  // class group machinery (F = Q only)
  const ClassGroupE& class_group() const;
  // class of the E-prime with the given key (F = Q backend)
  int class_index_of_prime(const EPrimeKey& k) const;
  int class_index(const EIdeal& J) const;

  // scenario validity: all primes dividing 2*N*p split in E, D coprime to N, p
  std::vector<std::string> validity_report(const IdealF& N, long long p) const;

 private:
  std::shared_ptr<const BaseField> F_;
  Elem delta_;
  IdealF D_;
  mutable std::map<int, SplitType> split_cache_;
  mutable std::unique_ptr<ClassGroupE> class_group_;
  mutable std::map<EPrimeKey, int> prime_class_cache_;
};

}  // namespace hmfq

#pragma once

#include <map>

#include "hmfq/cmext.hpp"
#include "hmfq/qexp.hpp"

namespace hmfq {

// Character of F modulo a level: trivial, the quadratic character of a CM
// extension, or (over Q) a Kronecker character.  Evaluation on ideals is
// multiplicative and vanishes on ideals sharing a factor with the modulus.
class FCharacter {
 public:
  static FCharacter trivial() { return FCharacter(); }
  static FCharacter epsilon_of(std::shared_ptr<const CMExtension> E);
  static FCharacter kronecker_over_Q(long long disc);

  bool is_trivial() const { return kind_ == Kind::Trivial; }
  long long kronecker_disc() const { return disc_; }
  // conductor support as F-prime ids (empty for the trivial character)
  std::vector<int> conductor_support(const BaseField& F) const;
  // value on an ideal coprime to the conductor; +-1 valued in scope
  Rational value(const BaseField& F, const IdealF& I) const;
  std::string id() const;

 private:
  enum class Kind { Trivial, Epsilon, Kronecker };
  Kind kind_ = Kind::Trivial;
  std::shared_ptr<const CMExtension> E_;
  long long disc_ = 0;
};

// The data (N, kappa, chi) parametrizing Hecke operators on q-expansions.
struct OperatorContext {
  std::shared_ptr<const BaseField> F;
  IdealF N;
  int weight = 2;
  FCharacter chi = FCharacter::trivial();

  // chi_[N](J) * Norm(J)^{kappa-1}: zero when J shares a factor with N or the
  // conductor of chi
  Rational chi_N_pow(const IdealF& J) const;
};

// b(L) = sum_{J | (L,M)} chi_[N](J) N(J)^{k-1} a(LM/J^2), with the constant
// term b0 = a0 * sum_{J | M} chi_[N](J) N(J)^{k-1}.  The output bound shrinks
// to floor(bound / N(M)) so every referenced coefficient exists.
QExpansion hecke_T(const OperatorContext& ctx, const IdealF& M, const QExpansion& f);

// T(P^m) = T(P^{m-1})T(P) - chi_[N](P) N(P)^{k-1} T(P^{m-2}) checked exactly
// on the common truncation; returns a human-readable report on failure.
struct RecursionReport {
  bool ok = true;
  std::string detail;
};
RecursionReport hecke_recursion_check(const OperatorContext& ctx, const PrimeF& P, int m,
                                      const QExpansion& f);

// V_D: a(I) -> coefficient at DI; constant term kept (narrow class number 1).
QExpansion v_op(const IdealF& D, const QExpansion& f);

// F(Q) = T(Q) - chi_[D](Q) N(Q)^{k-1} on level N; chi lives at conductor D.
QExpansion eis_level_raise(const OperatorContext& ctx, const PrimeF& Q, const QExpansion& f);

// unit root of X^2 - a X + normP over Z_p at precision M (a must be a p-unit)
PAdic unit_root_hensel(const Rational& a, long long normP, long long p, int M);

struct PStabilizationData {
  long long p = 0;
  int precision = 0;
  std::vector<int> primes_above;       // F-prime ids of the P_i
  std::vector<Rational> a_values;      // a(P_i, f)
  std::vector<PAdic> alpha;            // unit roots
  std::vector<PAdic> beta;             // a_i - alpha_i

  static PStabilizationData make(const BaseField& F, long long p, int precision,
                                 const std::map<int, Rational>& a_of_prime);
};

// f0 = sum_{J subset} (-1)^|J| (prod beta_j) V_{prod P_j}(f), in PAdic coefficients
QExpansion p_stabilize(const QExpansion& f, const PStabilizationData& data);

// multiplicative family from prime eigenvalues via the Hecke recursion
QExpansion gen_eigen(const OperatorContext& ctx, const std::map<int, Rational>& eigenvalues,
                     long long bound);

struct EOrdReport {
  QExpansion result;
  std::vector<long long> bounds_per_step;   // truncation after each factorial step
  std::vector<bool> stabilized;             // step j vs step j-1 on the overlap
  bool beta_annihilated = false;            // final expansion is 0 mod p^M
};
// applies T(p)^{k!} following the factorial schedule (T(p) = prod T(P_i)^{v_i})
EOrdReport e_ord_iterate(const OperatorContext& ctx, const QExpansion& f,
                         const PStabilizationData& data, int k);

// Decomposes target = sum c_j basis_j on leading coefficient slots and returns
// c_which * a((1), basis_which); verifies consistency on every shared slot.
Coefficient eigen_project(const std::vector<QExpansion>& basis, const QExpansion& target,
                          size_t which);

}  // namespace hmfq

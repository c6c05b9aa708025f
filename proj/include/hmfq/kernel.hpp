#pragma once

#include <optional>

#include "hmfq/thetaeis.hpp"

namespace hmfq {

// Scenario data for the kernel computations: base field, CM extension,
// level N, odd prime p, truncation bound; the validity report records every
// violated standing hypothesis (split conditions, coprimality) and must be
// empty before any kernel evaluation.
struct KernelScenario {
  std::shared_ptr<const BaseField> F;
  std::shared_ptr<const CMExtension> E;
  IdealF N;
  long long p = 0;
  std::vector<int> primes_above_p;
  long long bound = 0;
  // 2^{-n} L_{pD}(0, chi_F^{-1} eps): the Eisenstein constant entering the
  // second term of the coefficient formula (finite-character evaluations)
  std::optional<Rational> eis_constant;
  std::vector<std::string> validity;

  static KernelScenario make(std::shared_ptr<const CMExtension> E, IdealF N, long long p,
                             long long bound,
                             std::optional<Rational> eis_constant = std::nullopt);
  void require_valid() const;
  const IdealF& D() const;
};

// The function integrated against the kernel measure: either a finite-order
// character with [p]-vanishing, or the formal-log functional J -> sum_v
// ord_v(N_{E/F} J) log|q_v| (additive, vanishing off p-coprime ideals).
struct IdealFunctional {
  enum class Kind { FiniteCharacter, CycloLog };
  Kind kind = Kind::CycloLog;
  EHeckeCharacter chi = EHeckeCharacter::trivial({});

  static IdealFunctional finite(EHeckeCharacter c) {
    return {Kind::FiniteCharacter, std::move(c)};
  }
  static IdealFunctional cyclo_log() { return {Kind::CycloLog, EHeckeCharacter::trivial({})}; }
};

// Fourier coefficient of the kernel at I: the quadruple sum over divisors
// D1 | D, convex pairs alpha + beta = 1, ideals J of norm alpha D1 I prime to
// p, and K | beta D1 I / N prime to pD, plus the Eisenstein constant term.
Coefficient kernel_coeff(const KernelScenario& sc, const IdealFunctional& fun, const IdealF& I);

// exact rational coefficients of log|q_v| per F-prime id
using LocalVector = std::map<int, Rational>;

// a_v(I, Phi) through the general machinery (CycloLog kernel coefficient,
// reorganized per prime); requires p | I
LocalVector derivative_local(const KernelScenario& sc, const IdealF& I);

// a_v(I, Psi_f): the closed-form local coefficients, transcribed directly;
// an independent implementation sharing only basefield/cmext primitives
LocalVector geometric_local(const KernelScenario& sc, const IdealF& I);

struct LocalRow {
  int prime_id;
  SplitType type;
  Rational analytic;
  Rational geometric;
  bool equal = false;
};

struct LocalCoefficientReport {
  IdealF I;
  std::vector<LocalRow> rows;
  bool all_equal = true;
  bool split_vanishing = true;  // no split prime and no prime above p carries a value
  std::string mismatch_detail;
};

LocalCoefficientReport compare_kernel_at(const KernelScenario& sc, const IdealF& I);
// every I of norm <= norm_max with p | I, in canonical order
std::vector<LocalCoefficientReport> compare_kernels(const KernelScenario& sc,
                                                    long long norm_max, int parallelism = 1);

struct ProductKernelReport {
  bool ok = true;
  long long ideals_checked = 0;
  std::string first_mismatch;
};
// Theta(chi) * V_N E equals the D1 = (1) kernel summand plus the constant
// cross term, coefficient by coefficient (trivial character over Q).
ProductKernelReport product_vs_kernel_check(const KernelScenario& sc, long long bound);

}  // namespace hmfq

#pragma once

#include "hmfq/operators.hpp"

namespace hmfq {

// Theta series of a finite-order character of E: weight 1, coefficients
// a(I) = sum over O_E-ideals J of relative norm I of chi_[modulus](J), and
// vanishing constant term (the modulus must be nontrivial for that).
struct ThetaSpec {
  std::shared_ptr<const CMExtension> E;
  EHeckeCharacter chi;
  long long bound = 0;
};
QExpansion theta_coeffs(const ThetaSpec& spec);

enum class A0Source { ComputedBernoulli, Supplied, Omitted };

// Eisenstein series with coefficients sigma_{chi_[N],kappa-1}(I) =
// sum_{J | I, (J,N)=1} chi(J) N(J)^{kappa-1}; the constant term
// 2^{-n} L_N(1-kappa, chi) is computed over Q at kappa = 1, supplied, or
// declared omitted.
struct EisSpec {
  std::shared_ptr<const BaseField> F;
  FCharacter chi = FCharacter::trivial();
  int weight = 1;
  IdealF suppression;  // the [N] coprimality set (includes the conductor)
  long long bound = 0;
  A0Source a0_source = A0Source::Omitted;
  Coefficient a0_supplied = Coefficient(Rational(0));
};
QExpansion eis_coeffs(const EisSpec& spec);

// L(0, chi_d) = -B_{1,chi_d} for the primitive quadratic character of a
// negative fundamental discriminant; exact zero for even characters.
Rational l_value_at_zero_quadratic(long long disc);
// L_N(0, chi_d): Euler factors at primes ell | extra_level removed when they
// do not divide the conductor
Rational l_value_at_zero_quadratic_depleted(long long disc,
                                            const std::vector<long long>& extra_level);

// class-number side of the analytic class number formula at s = 0
long long class_number_imag(long long disc);
int unit_half_count(long long disc);  // w/2: 3 for -3, 2 for -4, else 1
bool is_fundamental_discriminant(long long disc);

}  // namespace hmfq

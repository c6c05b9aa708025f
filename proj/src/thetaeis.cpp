#include "hmfq/thetaeis.hpp"

namespace hmfq {

QExpansion theta_coeffs(const ThetaSpec& spec) {
  if (spec.chi.modulus_support().empty())
    throw precondition_error(
        "theta series needs a nontrivial character modulus (the constant term "
        "formula fails at modulus (1))");
  const CMExtension& E = *spec.E;
  QExpansion f(spec.E->F_ptr(), 1, E.rel_discriminant(), spec.bound, "theta");
  f.set_a0(Coefficient(Rational(0)));
  for (long long i = 0; i < f.size(); ++i) {
    const IdealF& I = f.ideal_at(i);
    Coefficient c(Rational(0));
    for (const EIdeal& J : E.list_ideals_of_norm(I)) c += spec.chi.eval(E, J);
    f.set_index(i, c);
  }
  return f;
}

QExpansion eis_coeffs(const EisSpec& spec) {
  const BaseField& F = *spec.F;
  QExpansion f(spec.F, spec.weight, spec.suppression, spec.bound,
               "eis:" + spec.chi.id());
  switch (spec.a0_source) {
    case A0Source::Omitted: f.mark_a0_omitted(); break;
    case A0Source::Supplied: f.set_a0(spec.a0_supplied); break;
    case A0Source::ComputedBernoulli: {
      if (F.kind() != FieldKind::Rational || spec.weight != 1)
        throw precondition_error(
            "computed constant terms are available over Q at weight 1 only");
      if (spec.chi.is_trivial())
        throw precondition_error(
            "everywhere-unramified character: the constant term must be supplied");
      long long disc = spec.chi.kronecker_disc();
      std::vector<long long> extra;
      long long ad = disc < 0 ? -disc : disc;
      for (auto& [pid, e] : spec.suppression.exps()) {
        long long ell = F.prime(pid).ell;
        if (ad % ell != 0) extra.push_back(ell);
      }
      Rational l = l_value_at_zero_quadratic_depleted(disc, extra);
      f.set_a0(Coefficient(l / Rational(2)));  // 2^{-n} with n = 1
      break;
    }
  }
  for (long long i = 0; i < f.size(); ++i) {
    const IdealF& I = f.ideal_at(i);
    Rational c(0);
    for (const IdealF& J : F.divisors(I)) {
      if (!gcd(J, spec.suppression).is_one()) continue;
      Rational v = spec.chi.value(F, J);
      if (v.is_zero()) continue;
      c += v * F.ideal_norm(J).pow(spec.weight - 1);
    }
    f.set_index(i, Coefficient(c));
  }
  return f;
}

Rational l_value_at_zero_quadratic(long long disc) {
  if (disc >= 0) {
    // even character (or trivial): exact zero at s = 0 by parity
    return Rational(0);
  }
  long long f = -disc;
  // L(0, chi) = -B_{1,chi} = -(1/f) sum_{a=1}^{f} a chi(a)
  Rational sum(0);
  for (long long a = 1; a <= f; ++a) {
    int chi = kronecker(disc, a);
    if (chi) sum += Rational(a * chi);
  }
  return -(sum / Rational(f));
}

Rational l_value_at_zero_quadratic_depleted(long long disc,
                                            const std::vector<long long>& extra_level) {
  Rational l = l_value_at_zero_quadratic(disc);
  for (long long ell : extra_level) l *= Rational(1) - Rational(kronecker(disc, ell));
  return l;
}

long long class_number_imag(long long disc) {
  return (long long)reduced_forms(disc).size();
}

int unit_half_count(long long disc) {
  if (disc == -3) return 3;
  if (disc == -4) return 2;
  return 1;
}

bool is_fundamental_discriminant(long long disc) {
  if (disc >= 0) return false;
  auto squarefree = [](long long n) {
    for (long long q = 2; q * q <= n; ++q)
      if (n % (q * q) == 0) return false;
    return true;
  };
  long long m = ((disc % 4) + 4) % 4;
  if (m == 1) return squarefree(-disc);
  if (m == 0) {
    long long q = disc / 4;
    long long qm = ((q % 4) + 4) % 4;
    return (qm == 2 || qm == 3) && squarefree(-q);
  }
  return false;
}

}  // namespace hmfq

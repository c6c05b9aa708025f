#include "hmfq/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <set>

namespace hmfq {

KernelScenario KernelScenario::make(std::shared_ptr<const CMExtension> E, IdealF N,
                                    long long p, long long bound,
                                    std::optional<Rational> eis_constant) {
  KernelScenario sc;
  sc.E = std::move(E);
  sc.F = sc.E->F_ptr();
  sc.N = std::move(N);
  sc.p = p;
  sc.bound = bound;
  sc.primes_above_p = sc.F->primes_above(p);
  sc.eis_constant = std::move(eis_constant);
  sc.validity = sc.E->validity_report(sc.N, p);
  if (p % 2 == 0 || p < 3) sc.validity.push_back("p must be an odd prime");
  return sc;
}

void KernelScenario::require_valid() const {
  if (validity.empty()) return;
  std::string msg = "invalid kernel scenario:";
  for (auto& v : validity) msg += " [" + v + "]";
  throw precondition_error(msg);
}

const IdealF& KernelScenario::D() const { return E->rel_discriminant(); }

namespace {

bool coprime_to_primes(const IdealF& I, const std::vector<int>& pids) {
  for (int pid : pids)
    if (I.ord(pid) != 0) return false;
  return true;
}

IdealF part_supported_on(const IdealF& I, const IdealF& S) {
  IdealF r;
  for (auto& [pid, e] : I.exps())
    if (S.ord(pid) != 0) r = r * IdealF::prime(pid, e);
  return r;
}

IdealF drop_support(const IdealF& I, const IdealF& S) {
  IdealF r;
  for (auto& [pid, e] : I.exps())
    if (S.ord(pid) == 0) r = r * IdealF::prime(pid, e);
  return r;
}

// One (D1, alpha, beta) cell of the analytic sum.  The J-sum and K-sum
// factor through each other only by scalars, so they are accumulated as
//   (sum over J of fun) * (sum over K of weight) per functional argument.
struct KernelAccumulator {
  Coefficient scalar{Rational(0)};  // finite-character total
  LocalVector vec;                  // cyclolog per-prime totals

  void add_vec(int prime_id, const Rational& c) {
    if (c.is_zero()) return;
    auto it = vec.find(prime_id);
    if (it == vec.end())
      vec.emplace(prime_id, c);
    else {
      it->second += c;
      if (it->second.is_zero()) vec.erase(it);
    }
  }
};

// the D1-summand of a(I, K(fun)); shared by kernel_coeff and derivative_local
void kernel_d1_summand(const KernelScenario& sc, const IdealFunctional& fun, const IdealF& I,
                       const IdealF& D1, KernelAccumulator& acc) {
  const BaseField& F = *sc.F;
  const CMExtension& E = *sc.E;
  const IdealF& D = sc.D();
  const int n = F.degree();
  IdealF D1I = D1 * I;
  EIdeal delta1 = E.sqrt_of_extended(D1);

  for (const ConvexCombination& pt : F.convex_lattice_points(D1I, false)) {
    IdealF A = F.ideal_of(pt.alpha) * D1I;
    IdealF B = F.ideal_of(pt.beta) * D1I;
    // J-sum support: N(J) = A with (J, p) = 1 forces A prime to p
    if (!coprime_to_primes(A, sc.primes_above_p)) continue;
    // K-sum support: K | B/N
    IdealF M = B / sc.N;
    if (!M.is_integral()) continue;

    // local characters at the ramified primes, full (tame-symbol) values
    Elem neg_ab = F.neg(F.mul(pt.alpha, pt.beta));
    std::map<int, int> eps_at;
    int eps_all = 1;
    for (auto& [pid, e] : D.exps()) {
      int v = E.local_eps_full(F.prime(pid), neg_ab);
      eps_at[pid] = v;
      eps_all *= v;
    }
    // audit: prod_w eps_w(-ab) = (-1)^n (-1)^{sum over inert v of ord_v(ab)},
    // the product formula for the quadratic Hecke character on -alpha*beta
    {
      IdealF ab2 = (A * B) / (D1I * D1I);
      int par = n;
      for (auto& [pid, e] : ab2.exps())
        if (E.splitting_type(pid) == SplitType::Inert) par += e;
      if (eps_all != (par % 2 == 0 ? 1 : -1))
        throw arithmetic_error("local character product formula violated at alpha = " +
                               pt.alpha.str());
    }
    int eps_prod = 1;
    for (auto& [pid, e] : D1.exps()) eps_prod *= eps_at[pid];

    IdealF B_D1 = part_supported_on(B, D1);

    if (fun.kind == IdealFunctional::Kind::CycloLog) {
      long long countJ = E.r_count(A);
      if (countJ == 0) continue;
      // functional value on J/(Delta1 K (B)_{D1}) via the norm identity:
      // N_{E/F} of it is alpha I / (K^2 (B)_{D1}^2), so the log-vector is the
      // exponent vector of that F-ideal
      IdealF base = (A / D1) / (B_D1 * B_D1);
      for (const IdealF& K : F.divisors(M)) {
        if (!coprime_to_primes(K, sc.primes_above_p)) continue;
        int epsK = E.epsilon_ideal(K);
        if (epsK == 0) continue;
        Rational w = Rational(countJ * epsK * eps_prod);
        IdealF arg = base / (K * K);
        for (auto& [pid, e] : arg.exps()) acc.add_vec(pid, w * Rational(e));
      }
    } else {
      // finite character: chi(J/Delta1 K (B)_{D1}) = chi(J) chi(Delta1)^{-1}
      // chi(K O_E)^{-1} chi((B)_{D1} O_E)^{-1}
      Coefficient sumJ(Rational(0));
      for (const EIdeal& J : E.list_ideals_of_norm(A)) sumJ += fun.chi.eval(E, J);
      if (sumJ.is_zero()) continue;
      Coefficient fixed = fun.chi.eval(E, (delta1 * E.extend(B_D1)).inverse());
      Coefficient ksum(Rational(0));
      for (const IdealF& K : F.divisors(M)) {
        if (!coprime_to_primes(K, sc.primes_above_p)) continue;
        int epsK = E.epsilon_ideal(K);
        if (epsK == 0) continue;
        Coefficient kv = fun.chi.eval(E, E.extend(K).inverse());
        ksum += Coefficient(Rational(epsK)) * kv;
      }
      acc.scalar += sumJ * fixed * ksum * Coefficient(Rational(eps_prod));
    }
  }
}

FormalLog collapse_to_formal_log(const BaseField& F, const LocalVector& vec) {
  FormalLog out;
  for (auto& [pid, c] : vec) {
    const PrimeF& P = F.prime(pid);
    // log|q_v| = f_v log(ell_v)
    out += FormalLog::basis(P.ell, c * Rational(P.f));
  }
  return out;
}

}  // namespace

Coefficient kernel_coeff(const KernelScenario& sc, const IdealFunctional& fun,
                         const IdealF& I) {
  sc.require_valid();
  if (!I.is_integral()) throw precondition_error("kernel coefficient at a fractional ideal");
  if (sc.F->ideal_norm_ll(I) > sc.bound)
    throw precondition_error("kernel coefficient beyond the scenario bound");
  const BaseField& F = *sc.F;
  IdealF pO = F.ideal_of_integer(sc.p);
  if (fun.kind == IdealFunctional::Kind::CycloLog) {
    if (!divides(pO, I))
      throw precondition_error("the formal-log kernel coefficient needs p | I");
  } else {
    std::vector<int> sup = fun.chi.modulus_support();
    std::sort(sup.begin(), sup.end());
    std::vector<int> pp = sc.primes_above_p;
    std::sort(pp.begin(), pp.end());
    if (sup != pp)
      throw precondition_error("the kernel character must carry the [p] modulus");
  }

  KernelAccumulator acc;
  for (const IdealF& D1 : F.divisors(sc.D())) kernel_d1_summand(sc, fun, I, D1, acc);

  if (fun.kind == IdealFunctional::Kind::CycloLog)
    return Coefficient(collapse_to_formal_log(F, acc.vec));

  // second term: 2^{-n} L_{pD}(0, chi_F^{-1} eps) * sum_{N(J) = I} chi_[p](J)
  Coefficient theta_part(Rational(0));
  for (const EIdeal& J : sc.E->list_ideals_of_norm(I)) theta_part += fun.chi.eval(*sc.E, J);
  if (!theta_part.is_zero()) {
    if (!sc.eis_constant)
      throw precondition_error(
          "the Eisenstein constant L_{pD}(0, chi_F^{-1} eps) is required but omitted");
    acc.scalar += Coefficient(*sc.eis_constant) * theta_part;
  }
  return acc.scalar;
}

LocalVector derivative_local(const KernelScenario& sc, const IdealF& I) {
  sc.require_valid();
  IdealF pO = sc.F->ideal_of_integer(sc.p);
  if (!divides(pO, I)) throw precondition_error("derivative coefficients need p | I");
  KernelAccumulator acc;
  for (const IdealF& D1 : sc.F->divisors(sc.D()))
    kernel_d1_summand(sc, IdealFunctional::cyclo_log(), I, D1, acc);
  return acc.vec;
}

LocalVector geometric_local(const KernelScenario& sc, const IdealF& I) {
  sc.require_valid();
  const BaseField& F = *sc.F;
  const CMExtension& E = *sc.E;
  const IdealF& D = sc.D();
  IdealF pO = F.ideal_of_integer(sc.p);
  if (!divides(pO, I)) throw precondition_error("geometric coefficients need p | I");

  // r with ramified parts ignored, zero off integral indices; this is the
  // reading of r(alpha I) forced by r(alpha D1 I) = r(alpha I)
  auto r_geo = [&](const IdealF& X) { return E.r_count(drop_support(X, D)); };

  LocalVector out;
  auto add = [&](int pid, const Rational& c) {
    if (c.is_zero()) return;
    auto it = out.find(pid);
    if (it == out.end())
      out.emplace(pid, c);
    else {
      it->second += c;
      if (it->second.is_zero()) out.erase(it);
    }
  };

  IdealF DI = D * I;
  for (const ConvexCombination& pt : F.convex_lattice_points(DI, false)) {
    IdealF A = F.ideal_of(pt.alpha) * DI;  // alpha D I
    IdealF B = F.ideal_of(pt.beta) * DI;   // beta D I
    if (!divides(sc.N, B)) continue;
    if (!coprime_to_primes(B, sc.primes_above_p)) continue;  // (p, beta D I) = 1
    long long r1 = r_geo(A);
    if (r1 == 0) continue;
    // delta = 2^{#{w | D : w | beta D I}}
    long long delta = 1;
    std::map<int, int> eps_at;
    for (auto& [pid, e] : D.exps()) {
      if (B.ord(pid) > 0) delta *= 2;
      eps_at[pid] = E.local_eps_full(F.prime(pid), F.neg(F.mul(pt.alpha, pt.beta)));
    }
    IdealF M = B / sc.N;

    // inert places: v | beta D I / N with the selector eps_w = 1 for all w | D
    bool all_plus = true;
    for (auto& [pid, v] : eps_at) all_plus = all_plus && v == 1;
    if (all_plus) {
      for (auto& [pid, e] : M.exps()) {
        if (E.splitting_type(pid) != SplitType::Inert) continue;
        long long r2 = r_geo(B / (sc.N * IdealF::prime(pid)));
        if (r2 == 0) continue;
        // ord_v(beta I q_v / N); v is inert so it divides neither D nor N
        long long mult = B.ord(pid) + 1;
        add(pid, Rational(delta * r1 * r2 * mult));
      }
    }
    // ramified places: eps_v = -1 at v, eps_w = 1 elsewhere
    for (auto& [pid, ed] : D.exps()) {
      if (eps_at[pid] != -1) continue;
      bool others_plus = true;
      for (auto& [pid2, v2] : eps_at) others_plus = others_plus && (pid2 == pid || v2 == 1);
      if (!others_plus) continue;
      long long r2 = r_geo(B / sc.N);
      if (r2 == 0) continue;
      // ord_v(beta I q_v) = ord_v(beta D I) since v divides D exactly once
      long long mult = B.ord(pid);
      if (mult == 0) continue;
      add(pid, Rational(delta * r1 * r2 * mult));
    }
  }
  return out;
}

LocalCoefficientReport compare_kernel_at(const KernelScenario& sc, const IdealF& I) {
  LocalCoefficientReport rep;
  rep.I = I;
  LocalVector an = derivative_local(sc, I);
  LocalVector ge = geometric_local(sc, I);
  std::set<int> keys;
  for (auto& [k, v] : an) keys.insert(k);
  for (auto& [k, v] : ge) keys.insert(k);
  for (int k : keys) {
    LocalRow row;
    row.prime_id = k;
    row.type = sc.E->splitting_type(k);
    auto ia = an.find(k);
    auto ig = ge.find(k);
    row.analytic = ia == an.end() ? Rational(0) : ia->second;
    row.geometric = ig == ge.end() ? Rational(0) : ig->second;
    row.equal = row.analytic == row.geometric;
    if (!row.equal) {
      rep.all_equal = false;
      if (rep.mismatch_detail.empty())
        rep.mismatch_detail = "I=" + I.str() + " prime P" + std::to_string(k) +
                              " analytic=" + row.analytic.str() +
                              " geometric=" + row.geometric.str();
    }
    bool protected_zero = row.type == SplitType::Split || sc.F->prime(k).ell == sc.p;
    if (protected_zero && (!row.analytic.is_zero() || !row.geometric.is_zero()))
      rep.split_vanishing = false;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<LocalCoefficientReport> compare_kernels(const KernelScenario& sc,
                                                    long long norm_max, int parallelism) {
  sc.require_valid();
  const BaseField& F = *sc.F;
  if (norm_max > sc.bound) throw precondition_error("comparison range beyond scenario bound");
  IdealF pO = F.ideal_of_integer(sc.p);
  std::vector<IdealF> targets;
  long long count = F.ideal_count(norm_max);
  for (long long i = 0; i < count; ++i) {
    const IdealF& I = F.ideal_at(i);
    if (divides(pO, I)) targets.push_back(I);
  }
  std::vector<LocalCoefficientReport> out(targets.size());
  if (parallelism <= 1) {
    for (size_t i = 0; i < targets.size(); ++i) out[i] = compare_kernel_at(sc, targets[i]);
    return out;
  }
  std::vector<std::future<void>> jobs;
  std::atomic<size_t> next{0};
  for (int t = 0; t < parallelism; ++t)
    jobs.push_back(std::async(std::launch::async, [&]() {
      for (size_t i = next.fetch_add(1); i < targets.size(); i = next.fetch_add(1))
        out[i] = compare_kernel_at(sc, targets[i]);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

ProductKernelReport product_vs_kernel_check(const KernelScenario& sc, long long bound) {
  sc.require_valid();
  if (sc.F->kind() != FieldKind::Rational)
    throw precondition_error("the product check scenario runs over Q");
  const BaseField& F = *sc.F;
  ThetaSpec ts{sc.E, EHeckeCharacter::trivial(sc.primes_above_p), bound};
  QExpansion theta = theta_coeffs(ts);
  IdealF suppression = sc.D();
  for (int pid : sc.primes_above_p) suppression = suppression * IdealF::prime(pid);
  EisSpec es;
  es.F = sc.F;
  es.chi = FCharacter::kronecker_over_Q(sc.E->delta().a.as_integer());
  es.weight = 1;
  es.suppression = suppression;
  es.bound = bound;
  es.a0_source = A0Source::ComputedBernoulli;
  QExpansion eis = eis_coeffs(es);
  if (sc.eis_constant && !(eis.a0().rat() == *sc.eis_constant))
    throw precondition_error("scenario Eisenstein constant disagrees with the computed one");
  QExpansion X = qexp_mul(theta, v_op(sc.N, eis));

  IdealFunctional fun = IdealFunctional::finite(EHeckeCharacter::trivial(sc.primes_above_p));
  ProductKernelReport rep;
  if (!X.a0().is_zero()) {
    rep.ok = false;
    rep.first_mismatch = "constant term of the product is nonzero";
    return rep;
  }
  Rational a0_eis = eis.a0().rat();
  for (long long i = 0; i < X.size(); ++i) {
    const IdealF& I = X.ideal_at(i);
    KernelAccumulator acc;
    kernel_d1_summand(sc, fun, I, IdealF::one(), acc);
    Coefficient kern = acc.scalar;
    // constant cross term: a0(E) * theta coefficient
    kern += Coefficient(a0_eis) * theta.a(I);
    ++rep.ideals_checked;
    if (!(kern == X.at_index(i))) {
      rep.ok = false;
      rep.first_mismatch = "I=" + I.str() + " product=" + X.at_index(i).str() +
                           " kernel=" + kern.str();
      return rep;
    }
  }
  return rep;
}

}  // namespace hmfq

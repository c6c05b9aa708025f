#include "hmfq/operators.hpp"

#include <algorithm>

namespace hmfq {

FCharacter FCharacter::epsilon_of(std::shared_ptr<const CMExtension> E) {
  FCharacter chi;
  chi.kind_ = Kind::Epsilon;
  chi.E_ = std::move(E);
  return chi;
}

FCharacter FCharacter::kronecker_over_Q(long long disc) {
  FCharacter chi;
  chi.kind_ = Kind::Kronecker;
  chi.disc_ = disc;
  return chi;
}

std::vector<int> FCharacter::conductor_support(const BaseField& F) const {
  std::vector<int> out;
  switch (kind_) {
    case Kind::Trivial: break;
    case Kind::Epsilon:
      for (auto& [pid, e] : E_->rel_discriminant().exps()) out.push_back(pid);
      break;
    case Kind::Kronecker: {
      long long d = disc_ < 0 ? -disc_ : disc_;
      for (long long ell = 2; d > 1; ++ell) {
        if (ell * ell > d) ell = d;
        if (d % ell) continue;
        while (d % ell == 0) d /= ell;
        for (int pid : F.primes_above(ell)) out.push_back(pid);
      }
      break;
    }
  }
  return out;
}

Rational FCharacter::value(const BaseField& F, const IdealF& I) const {
  switch (kind_) {
    case Kind::Trivial: return Rational(1);
    case Kind::Epsilon: return Rational(E_->epsilon_ideal(I));
    case Kind::Kronecker: {
      if (F.kind() != FieldKind::Rational)
        throw precondition_error("Kronecker characters are defined over Q only");
      long long n = F.ideal_norm_ll(I);
      return Rational(kronecker(disc_, n));
    }
  }
  return Rational(0);
}

std::string FCharacter::id() const {
  switch (kind_) {
    case Kind::Trivial: return "trivial";
    case Kind::Epsilon: return "epsilon";
    case Kind::Kronecker: return "kronecker(" + std::to_string(disc_) + ")";
  }
  return "?";
}

Rational OperatorContext::chi_N_pow(const IdealF& J) const {
  if (!gcd(J, N).is_one()) return Rational(0);
  Rational v = chi.value(*F, J);
  if (v.is_zero()) return v;
  return v * F->ideal_norm(J).pow(weight - 1);
}

QExpansion hecke_T(const OperatorContext& ctx, const IdealF& M, const QExpansion& f) {
  if (!M.is_integral()) throw precondition_error("Hecke index must be integral");
  const BaseField& F = f.F();
  long long normM = F.ideal_norm_ll(M);
  long long out_bound = f.bound() / normM;
  QExpansion g(f.F_ptr(), f.weight(), f.level(), out_bound, f.character_id());
  // constant term: a0 * sum_{J | M} chi_[N](J) N(J)^{k-1}
  Coefficient c0(Rational(0));
  for (const IdealF& J : F.divisors(M)) {
    Rational w = ctx.chi_N_pow(J);
    if (!w.is_zero()) c0 += Coefficient(w) * f.a0();
  }
  g.set_a0(c0);
  for (long long i = 0; i < g.size(); ++i) {
    const IdealF& L = g.ideal_at(i);
    Coefficient b(Rational(0));
    for (const IdealF& J : F.divisors(gcd(L, M))) {
      Rational w = ctx.chi_N_pow(J);
      if (w.is_zero()) continue;
      IdealF idx = L * M / (J * J);
      b += Coefficient(w) * f.a(idx);
    }
    g.set_index(i, b);
  }
  return g;
}

RecursionReport hecke_recursion_check(const OperatorContext& ctx, const PrimeF& P, int m,
                                      const QExpansion& f) {
  if (m < 2) throw precondition_error("recursion check needs m >= 2");
  IdealF Pm = IdealF::prime(P.id, m);
  QExpansion lhs = hecke_T(ctx, Pm, f);
  QExpansion t1 = hecke_T(ctx, IdealF::prime(P.id, m - 1), hecke_T(ctx, IdealF::prime(P.id), f));
  Rational c = ctx.chi_N_pow(IdealF::prime(P.id));
  QExpansion t2 = hecke_T(ctx, IdealF::prime(P.id, m - 2), f).restrict_bound(lhs.bound());
  QExpansion rhs = qexp_add(t1, qexp_scale(Coefficient(-c), t2));
  RecursionReport rep;
  if (!(lhs.a0() == rhs.a0())) {
    rep.ok = false;
    rep.detail = "constant terms differ: " + lhs.a0().str() + " vs " + rhs.a0().str();
    return rep;
  }
  for (long long i = 0; i < lhs.size(); ++i) {
    if (!(lhs.at_index(i) == rhs.at_index(i))) {
      rep.ok = false;
      rep.detail = "coefficient at " + lhs.ideal_at(i).str() + ": " +
                   lhs.at_index(i).str() + " vs " + rhs.at_index(i).str();
      return rep;
    }
  }
  return rep;
}

QExpansion v_op(const IdealF& D, const QExpansion& f) {
  if (!D.is_integral()) throw precondition_error("V index must be integral");
  QExpansion g(f.F_ptr(), f.weight(), f.level() * D, f.bound(), f.character_id());
  g.set_a0(f.a0());
  for (long long i = 0; i < g.size(); ++i) {
    const IdealF& I = g.ideal_at(i);
    IdealF quot = I / D;
    if (quot.is_integral()) g.set_index(i, f.a(quot));
  }
  return g;
}

QExpansion eis_level_raise(const OperatorContext& ctx, const PrimeF& Q, const QExpansion& f) {
  IdealF Qi = IdealF::prime(Q.id);
  if (!ctx.chi.is_trivial()) {
    for (int pid : ctx.chi.conductor_support(*ctx.F))
      if (pid == Q.id) throw precondition_error("F(Q) requires Q prime to the conductor");
  }
  if (ctx.N.ord(Q.id) == 0)
    throw precondition_error("F(Q) requires Q to divide the target level");
  QExpansion t = hecke_T(ctx, Qi, f);
  Rational c = ctx.chi.value(*ctx.F, Qi) * ctx.F->ideal_norm(Qi).pow(ctx.weight - 1);
  return qexp_add(t, qexp_scale(Coefficient(-c), f.restrict_bound(t.bound())));
}

PAdic unit_root_hensel(const Rational& a, long long normP, long long p, int M) {
  if (M < 1) throw precondition_error("precision must be >= 1");
  PAdic ap = PAdic::from_rational(a, p, M);
  if (!ap.is_unit()) throw precondition_error("non-ordinary: a is not a p-adic unit");
  if (normP % p != 0)
    throw precondition_error("norm of the prime must be divisible by p");
  PAdic n(p, M, normP);
  PAdic alpha = ap;  // root of X(X - a) mod p lifted by Newton iteration
  for (int it = 0; it < M + 2; ++it) {
    PAdic fx = alpha * alpha - ap * alpha + n;
    PAdic dfx = alpha + alpha - ap;
    alpha = alpha - fx * dfx.inverse();
  }
  PAdic check = alpha * alpha - ap * alpha + n;
  if (!check.is_zero()) throw arithmetic_error("Hensel iteration failed to converge");
  if (!alpha.is_unit()) throw arithmetic_error("Hensel root is not a unit");
  return alpha;
}

PStabilizationData PStabilizationData::make(const BaseField& F, long long p, int precision,
                                            const std::map<int, Rational>& a_of_prime) {
  PStabilizationData d;
  d.p = p;
  d.precision = precision;
  for (int pid : F.primes_above(p)) {
    auto it = a_of_prime.find(pid);
    if (it == a_of_prime.end())
      throw precondition_error("missing a(P) for a prime above p");
    d.primes_above.push_back(pid);
    d.a_values.push_back(it->second);
    PAdic alpha = unit_root_hensel(it->second, F.prime(pid).norm, p, precision);
    d.alpha.push_back(alpha);
    d.beta.push_back(PAdic::from_rational(it->second, p, precision) - alpha);
  }
  return d;
}

QExpansion p_stabilize(const QExpansion& f, const PStabilizationData& data) {
  QExpansion g0 = f.map([&](const Coefficient& c) {
    return Coefficient(c.to_padic(data.p, data.precision));
  });
  size_t l = data.primes_above.size();
  IdealF bigP;
  for (int pid : data.primes_above) bigP = bigP * IdealF::prime(pid);
  QExpansion acc(f.F_ptr(), f.weight(), f.level() * bigP, f.bound(), f.character_id());
  acc.set_a0(Coefficient(PAdic(data.p, data.precision, 0)));
  for (long long i = 0; i < acc.size(); ++i)
    acc.set_index(i, Coefficient(PAdic(data.p, data.precision, 0)));
  for (size_t mask = 0; mask < (size_t(1) << l); ++mask) {
    IdealF prod;
    PAdic scale(data.p, data.precision, 1);
    int sign = 1;
    for (size_t j = 0; j < l; ++j)
      if (mask & (size_t(1) << j)) {
        prod = prod * IdealF::prime(data.primes_above[j]);
        scale *= data.beta[j];
        sign = -sign;
      }
    QExpansion term = v_op(prod, g0);
    Coefficient s = sign > 0 ? Coefficient(scale) : Coefficient(-scale);
    term = qexp_scale(s, term);
    acc.set_a0(acc.a0() + term.a0());
    for (long long i = 0; i < acc.size(); ++i)
      acc.set_index(i, acc.at_index(i) + term.at_index(i));
  }
  return acc;
}

QExpansion gen_eigen(const OperatorContext& ctx, const std::map<int, Rational>& eigenvalues,
                     long long bound) {
  QExpansion f(ctx.F, ctx.weight, ctx.N, bound, ctx.chi.id());
  f.set_a0(Coefficient(Rational(0)));
  // prime power values by the recursion, then multiplicative extension
  std::map<std::pair<int, int>, Rational> pp;
  auto prime_power = [&](int pid, int e) -> Rational {
    if (e == 0) return Rational(1);
    auto it = pp.find({pid, e});
    if (it != pp.end()) return it->second;
    auto lam = eigenvalues.find(pid);
    if (lam == eigenvalues.end())
      throw precondition_error("missing eigenvalue for prime P" + std::to_string(pid));
    Rational r;
    if (e == 1) {
      r = lam->second;
    } else {
      Rational c = ctx.chi_N_pow(IdealF::prime(pid));
      std::function<Rational(int)> rec = [&](int k) -> Rational {
        if (k == 0) return Rational(1);
        if (k == 1) return lam->second;
        auto cached = pp.find({pid, k});
        if (cached != pp.end()) return cached->second;
        Rational v = lam->second * rec(k - 1) - c * rec(k - 2);
        pp[{pid, k}] = v;
        return v;
      };
      r = rec(e);
    }
    pp[{pid, e}] = r;
    return r;
  };
  for (long long i = 0; i < f.size(); ++i) {
    const IdealF& I = f.ideal_at(i);
    Rational v(1);
    for (auto& [pid, e] : I.exps()) v *= prime_power(pid, e);
    f.set_index(i, Coefficient(v));
  }
  return f;
}

EOrdReport e_ord_iterate(const OperatorContext& ctx, const QExpansion& f,
                         const PStabilizationData& data, int k) {
  if (k < 1) throw precondition_error("e_ord needs k >= 1");
  for (int pid : data.primes_above)
    if (ctx.N.ord(pid) == 0)
      throw precondition_error("e_ord needs the level divisible by every prime above p");
  const BaseField& F = *ctx.F;
  IdealF pO = F.ideal_of_integer(data.p);
  auto apply_Tp = [&](const QExpansion& g) {
    QExpansion h = g;
    for (auto& [pid, e] : pO.exps())
      for (int i = 0; i < e; ++i) h = hecke_T(ctx, IdealF::prime(pid), h);
    return h;
  };
  EOrdReport rep{f, {}, {}, false};
  QExpansion cur = f;
  long long factorial = 1;
  long long applied = 0;
  QExpansion prev = f;
  for (int step = 1; step <= k; ++step) {
    factorial *= step;
    while (applied < factorial) {
      cur = apply_Tp(cur);
      ++applied;
      if (cur.bound() < 1)
        throw precondition_error("precision exhausted: T(p)^" + std::to_string(applied) +
                                 " shrank the expansion to an empty truncation");
    }
    rep.bounds_per_step.push_back(cur.bound());
    if (step > 1) {
      // dense prefixes share global indexing, so compare the overlap directly
      bool same = prev.a0() == cur.a0();
      for (long long i = 0; same && i < cur.size(); ++i)
        same = prev.at_index(i) == cur.at_index(i);
      rep.stabilized.push_back(same);
    }
    prev = cur;
  }
  bool zero = cur.a0().is_zero();
  for (long long i = 0; zero && i < cur.size(); ++i) zero = cur.at_index(i).is_zero();
  rep.beta_annihilated = zero;
  rep.result = cur;
  return rep;
}

namespace {

Coefficient coeff_div(const Coefficient& a, const Coefficient& b) {
  if (b.is_zero()) throw arithmetic_error("division by zero coefficient");
  switch (b.tag()) {
    case Coefficient::Tag::Rational:
      if (a.tag() == Coefficient::Tag::Rational) return Coefficient(a.rat() / b.rat());
      throw arithmetic_error("mixed-tag division");
    case Coefficient::Tag::PAdic: {
      PAdic an = a.tag() == Coefficient::Tag::Rational
                     ? PAdic::from_rational(a.rat(), b.padic().p(), b.padic().precision())
                     : a.padic();
      return Coefficient(an * b.padic().inverse());
    }
    default: throw arithmetic_error("unsupported coefficient division");
  }
}

bool invertible_pivot(const Coefficient& c) {
  if (c.is_zero()) return false;
  if (c.tag() == Coefficient::Tag::PAdic) return c.padic().is_unit();
  return c.tag() == Coefficient::Tag::Rational;
}

}  // namespace

Coefficient eigen_project(const std::vector<QExpansion>& basis, const QExpansion& target,
                          size_t which) {
  if (basis.empty()) throw precondition_error("empty eigenbasis");
  if (which >= basis.size()) throw precondition_error("component index out of range");
  size_t m = basis.size();
  long long slots = target.size();
  for (auto& b : basis) slots = std::min(slots, b.size());
  if (slots < (long long)m)
    throw precondition_error("not enough coefficient slots for the eigenbasis");
  // Gaussian elimination, consuming slots until m pivots are found.
  std::vector<std::vector<Coefficient>> rows;  // m coefficients then target value
  std::vector<int> pivot_col;
  long long slot = 0;
  auto row_at = [&](long long s) {
    std::vector<Coefficient> r;
    const IdealF& I = target.ideal_at(s);
    for (auto& b : basis) r.push_back(b.a(I));
    r.push_back(target.a(I));
    return r;
  };
  while (rows.size() < m && slot < slots) {
    auto r = row_at(slot++);
    // eliminate known pivots
    for (size_t i = 0; i < rows.size(); ++i) {
      Coefficient factor = r[pivot_col[i]];
      if (factor.is_zero()) continue;
      for (size_t j = 0; j <= m; ++j) r[j] = r[j] - factor * rows[i][j];
    }
    int pc = -1;
    for (size_t j = 0; j < m; ++j)
      if (invertible_pivot(r[j])) {
        pc = (int)j;
        break;
      }
    if (pc < 0) {
      bool all_zero = true;
      for (size_t j = 0; j <= m; ++j) all_zero = all_zero && r[j].is_zero();
      if (!all_zero && !r[m].is_zero()) {
        bool lhs_zero = true;
        for (size_t j = 0; j < m; ++j) lhs_zero = lhs_zero && r[j].is_zero();
        if (lhs_zero)
          throw precondition_error("target is not in the span of the eigenbasis");
      }
      continue;
    }
    Coefficient inv_applied = r[pc];
    for (size_t j = 0; j <= m; ++j) r[j] = coeff_div(r[j], inv_applied);
    rows.push_back(std::move(r));
    pivot_col.push_back(pc);
  }
  if (rows.size() < m)
    throw precondition_error("eigenbasis is not independent on the available slots");
  // back-substitute into c (solution vector)
  std::vector<Coefficient> c(m, Coefficient(Rational(0)));
  for (size_t i = rows.size(); i-- > 0;) {
    Coefficient v = rows[i][m];
    for (size_t j = 0; j < m; ++j)
      if ((int)j != pivot_col[i] && !rows[i][j].is_zero()) v = v - rows[i][j] * c[j];
    c[pivot_col[i]] = v;
  }
  // consistency on every remaining shared slot
  for (long long s = 0; s < slots; ++s) {
    const IdealF& I = target.ideal_at(s);
    Coefficient acc = target.a(I);
    for (size_t j = 0; j < m; ++j) acc = acc - c[j] * basis[j].a(I);
    if (!acc.is_zero())
      throw precondition_error("target is not in the span of the eigenbasis (slot " +
                               I.str() + ")");
  }
  return c[which] * basis[which].a(IdealF::one());
}

}  // namespace hmfq

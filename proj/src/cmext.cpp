#include "hmfq/cmext.hpp"

#include <algorithm>

namespace hmfq {

namespace {

long long mod_pos(long long a, long long m) {
  a %= m;
  return a < 0 ? a + m : a;
}

long long pow_mod(long long b, long long e, long long m) {
  long long r = 1 % m;
  b = mod_pos(b, m);
  while (e) {
    if (e & 1) r = (__int128)r * b % m;
    b = (__int128)b * b % m;
    e >>= 1;
  }
  return r;
}

int legendre(long long a, long long ell) {
  a = mod_pos(a, ell);
  if (a == 0) return 0;
  return pow_mod(a, (ell - 1) / 2, ell) == 1 ? 1 : -1;
}

long long extgcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  long long x1, y1;
  long long g = extgcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// binary quadratic forms

BQForm reduce_form(BQForm f) {
  long long disc = f.disc();
  if (disc >= 0) throw precondition_error("form discriminant must be negative");
  while (true) {
    // normalize: -a < b <= a
    if (f.b > f.a || f.b <= -f.a) {
      long long r = mod_pos(f.b + f.a, 2 * f.a) - f.a;  // r in (-a, a]
      if (r <= -f.a) r += 2 * f.a;
      f.c = f.c + (r * r - f.b * f.b) / (4 * f.a);
      f.b = r;
    }
    if (f.a > f.c) {
      f = {f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    if (f.b == -f.a) f.b = f.a;
    break;
  }
  return f;
}

BQForm compose_forms(const BQForm& f, const BQForm& g) {
  long long disc = f.disc();
  if (disc != g.disc()) throw precondition_error("form discriminants differ");
  long long beta = (f.b + g.b) / 2;
  long long x1, y1;
  long long g1 = extgcd(f.a, g.a, x1, y1);
  long long x2, z;
  long long m = extgcd(g1, beta, x2, z);
  long long x = x1 * x2, y = y1 * x2;
  // x*a1 + y*a2 + z*beta = m
  long long A = (f.a / m) * (g.a / m);
  __int128 Bn = (__int128)f.a * g.b % (2 * (__int128)A * m) * x +
                (__int128)g.a * f.b % (2 * (__int128)A * m) * y +
                (__int128)z * (((__int128)f.b * g.b + disc) / 2) % (2 * (__int128)A * m);
  __int128 mod = 2 * (__int128)A;
  __int128 B128 = Bn / m % mod;
  if ((Bn % m) != 0) {
    // exact division must hold; recompute without premature reduction
    __int128 full = (__int128)f.a * g.b * x + (__int128)g.a * f.b * y +
                    (__int128)z * (((__int128)f.b * g.b + disc) / 2);
    if (full % m != 0) throw arithmetic_error("form composition: inexact division");
    B128 = (full / m) % mod;
  }
  long long B = (long long)((B128 % mod + mod) % mod);
  __int128 Bsq = (__int128)B * B;
  if ((Bsq - disc) % (4 * (__int128)A) != 0)
    throw arithmetic_error("form composition: B^2 != disc mod 4A");
  long long C = (long long)((Bsq - disc) / (4 * A));
  return reduce_form({A, B, C});
}

std::vector<BQForm> reduced_forms(long long disc) {
  if (disc >= 0 || mod_pos(disc, 4) > 1)
    throw precondition_error("not an imaginary quadratic discriminant");
  std::vector<BQForm> out;
  for (long long a = 1; 4 * a * a <= -disc + a * a * 3 + 3; ++a) {
    if (a * a * 3 > -disc) break;
    for (long long b = -a + 1; b <= a; ++b) {
      if (mod_pos(b - disc, 2) != 0) continue;
      long long num = b * b - disc;
      if (num % (4 * a) != 0) continue;
      long long c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      long long g = std::gcd(std::gcd(a, b < 0 ? -b : b), c);
      if (g != 1) continue;  // primitive forms only
      out.push_back({a, b, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClassGroupE::ClassGroupE(long long disc) : disc_(disc), forms_(reduced_forms(disc)) {
  int h = (int)forms_.size();
  table_.assign(h, std::vector<int>(h, -1));
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) table_[i][j] = index_of(compose_forms(forms_[i], forms_[j]));
  long long b0 = mod_pos(disc, 2);
  id_ = index_of(reduce_form({1, b0, (b0 * b0 - disc) / 4}));
  // group axioms are implied by form theory; spot-check closure happened above
}

int ClassGroupE::index_of(const BQForm& f) const {
  BQForm r = reduce_form(f);
  auto it = std::lower_bound(forms_.begin(), forms_.end(), r);
  if (it == forms_.end() || !(*it == r))
    throw arithmetic_error("form " + f.str() + " not in the reduced list");
  return (int)(it - forms_.begin());
}

int ClassGroupE::inverse(int i) const {
  for (int j = 0; j < order(); ++j)
    if (table_[i][j] == id_) return j;
  throw arithmetic_error("no inverse in class group");
}

int ClassGroupE::element_order(int i) const {
  int k = 1, x = i;
  while (x != id_) {
    x = table_[x][i];
    ++k;
  }
  return k;
}

// ---------------------------------------------------------------------------
// E-ideals

std::string EIdeal::str() const {
  if (e_.empty()) return "(1)";
  std::string s;
  for (auto& [k, e] : e_) {
    if (!s.empty()) s += "*";
    s += "Q" + std::to_string(k.below) + (k.slot ? "'" : "");
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

// ---------------------------------------------------------------------------
// the CM extension

CMExtension::CMExtension(std::shared_ptr<const BaseField> F, Elem delta)
    : F_(std::move(F)), delta_(std::move(delta)) {
  if (!F_->is_integral(delta_)) throw precondition_error("delta must be integral");
  if (F_->sign_embedding(delta_, 0) >= 0 ||
      (F_->degree() == 2 && F_->sign_embedding(delta_, 1) >= 0))
    throw precondition_error("delta must be totally negative");
  if (F_->kind() == FieldKind::Rational) {
    long long dl = delta_.a.as_integer();
    if (mod_pos(dl, 4) != 1)
      throw precondition_error(
          "delta = " + std::to_string(dl) +
          " has even relative discriminant (needs delta = 1 mod 4); only odd "
          "discriminants are supported");
  }
  // ramified primes: odd valuation of delta at odd primes
  IdealF dl_ideal = F_->ideal_of(delta_);
  for (auto& [pid, e] : dl_ideal.exps()) {
    const PrimeF& P = F_->prime(pid);
    if (e % 2 == 0) continue;
    if (P.ell == 2)
      throw precondition_error("delta ramifies at residue characteristic 2; unsupported");
    D_ = D_ * IdealF::prime(pid, 1);
  }
  if (F_->kind() == FieldKind::RealQuadratic) {
    // residue characteristic 2 must be unramified in E (odd D); verify the
    // local square-class conditions now so splitting_type can rely on them
    for (int pid : F_->primes_above(2)) {
      const PrimeF& P = F_->prime(pid);
      if (P.e == 2 || P.f == 1)
        throw precondition_error(
            "base fields where 2 is split or ramified are not supported for CM data");
      (void)splitting_type(P);
    }
  }
}

SplitType CMExtension::splitting_type(const PrimeF& P) const {
  auto it = split_cache_.find(P.id);
  if (it != split_cache_.end()) return it->second;
  SplitType st;
  if (F_->kind() == FieldKind::Rational) {
    long long dl = delta_.a.as_integer();
    int k = kronecker(dl, P.ell);
    st = k == 1 ? SplitType::Split : k == -1 ? SplitType::Inert : SplitType::Ramified;
  } else if (P.ell == 2) {
    // 2 inert in F; delta is a 2-adic unit here (odd D enforced)
    // split  <=> delta is a square mod 8
    // inert  <=> delta is a square mod 4 but not mod 8
    // otherwise E/F ramifies at 2: rejected
    auto square_mod = [&](long long m) {
      bool half = mod_pos(F_->d(), 4) == 1;
      for (long long u = 0; u < m; ++u)
        for (long long v = 0; v < m; ++v) {
          Elem x = half ? Elem(Rational(u) + Rational(v, 2), Rational(v, 2))
                        : Elem(Rational(u), Rational(v));
          Elem diff = F_->sub(F_->mul(x, x), delta_);
          // diff = 0 mod m on omega-coordinates
          Rational cu = half ? diff.a - diff.b : diff.a;
          Rational cv = half ? diff.b + diff.b : diff.b;
          if (mod_pos(cu.as_integer(), m) == 0 && mod_pos(cv.as_integer(), m) == 0)
            return true;
        }
      return false;
    };
    if (square_mod(8))
      st = SplitType::Split;
    else if (square_mod(4))
      st = SplitType::Inert;
    else
      throw precondition_error("E/F ramifies at 2: unsupported CM data");
  } else {
    int t = F_->val(delta_, P);
    if (t % 2 == 1) {
      st = SplitType::Ramified;
    } else {
      // unit part of delta at P
      Elem u = delta_;
      for (int i = 0; i < t; ++i) u = F_->div(u, P.gen);
      auto [c0, c1] = F_->reduce_mod(u, P);
      int leg;
      if (P.f == 1) {
        leg = legendre(c0, P.ell);
      } else {
        // x is a square in F_{l^2} iff its norm to F_l is a square
        long long n = mod_pos(
            c0 * c0 % P.ell - (__int128)c1 * c1 % P.ell * mod_pos(F_->d(), P.ell) % P.ell,
            P.ell);
        leg = legendre(n, P.ell);
      }
      st = leg == 1 ? SplitType::Split : SplitType::Inert;
    }
  }
  split_cache_[P.id] = st;
  return st;
}

int CMExtension::epsilon(const PrimeF& P) const {
  switch (splitting_type(P)) {
    case SplitType::Split: return 1;
    case SplitType::Inert: return -1;
    case SplitType::Ramified: return 0;
  }
  return 0;
}

int CMExtension::epsilon_ideal(const IdealF& I) const {
  int r = 1;
  for (auto& [pid, e] : I.exps()) {
    int ep = epsilon(F_->prime(pid));
    if (ep == 0) return 0;
    if (e % 2) r *= ep;
  }
  return r;
}

long long CMExtension::r_count(const IdealF& I) const {
  if (!I.is_integral()) return 0;
  long long r = 1;
  for (auto& [pid, e] : I.exps()) {
    switch (splitting_type(F_->prime(pid))) {
      case SplitType::Split: r *= (e + 1); break;
      case SplitType::Inert:
        if (e % 2) return 0;
        break;
      case SplitType::Ramified: break;
    }
  }
  return r;
}

long long CMExtension::r_count_coprime(const IdealF& I,
                                       const std::vector<int>& avoid_below) const {
  if (!I.is_integral()) return 0;
  for (int pid : avoid_below)
    if (I.ord(pid) != 0) return 0;
  return r_count(I);
}

std::vector<EIdeal> CMExtension::list_ideals_of_norm(const IdealF& I) const {
  std::vector<EIdeal> out;
  if (!I.is_integral()) return out;
  out.push_back(EIdeal());
  for (auto& [pid, e] : I.exps()) {
    std::vector<EIdeal> local;
    switch (splitting_type(F_->prime(pid))) {
      case SplitType::Split:
        for (int a = 0; a <= e; ++a) {
          EIdeal J = EIdeal::prime({pid, 0}, a) * EIdeal::prime({pid, 1}, e - a);
          local.push_back(J);
        }
        break;
      case SplitType::Inert:
        if (e % 2) return {};
        local.push_back(EIdeal::prime({pid, 0}, e / 2));
        break;
      case SplitType::Ramified:
        local.push_back(EIdeal::prime({pid, 0}, e));
        break;
    }
    std::vector<EIdeal> next;
    for (auto& J : out)
      for (auto& L : local) next.push_back(J * L);
    out = std::move(next);
  }
  return out;
}

IdealF CMExtension::relative_norm(const EIdeal& J) const {
  IdealF I;
  for (auto& [k, e] : J.exps()) {
    int mult = splitting_type(F_->prime(k.below)) == SplitType::Inert ? 2 : 1;
    I = I * IdealF::prime(k.below, mult * e);
  }
  return I;
}

EIdeal CMExtension::extend(const IdealF& I) const {
  EIdeal J;
  for (auto& [pid, e] : I.exps()) {
    switch (splitting_type(F_->prime(pid))) {
      case SplitType::Split:
        J = J * EIdeal::prime({pid, 0}, e) * EIdeal::prime({pid, 1}, e);
        break;
      case SplitType::Inert: J = J * EIdeal::prime({pid, 0}, e); break;
      case SplitType::Ramified: J = J * EIdeal::prime({pid, 0}, 2 * e); break;
    }
  }
  return J;
}

EIdeal CMExtension::sqrt_of_extended(const IdealF& D1) const {
  EIdeal J;
  for (auto& [pid, e] : D1.exps()) {
    if (e != 1 || splitting_type(F_->prime(pid)) != SplitType::Ramified)
      throw precondition_error("sqrt of extension needs a squarefree ramified ideal");
    J = J * EIdeal::prime({pid, 0}, 1);
  }
  return J;
}

int CMExtension::local_eps(const PrimeF& v, const Elem& x) const {
  if (splitting_type(v) != SplitType::Ramified)
    throw precondition_error("local_eps needs a ramified prime");
  if (v.ell == 2) throw precondition_error("local_eps at residue characteristic 2");
  if (F_->val(x, v) != 0) throw precondition_error("local_eps argument is not a v-unit");
  auto [c0, c1] = F_->reduce_mod(x, v);
  if (v.f == 1) return legendre(c0, v.ell);
  long long n = mod_pos(
      c0 * c0 % v.ell - (__int128)c1 * c1 % v.ell * mod_pos(F_->d(), v.ell) % v.ell, v.ell);
  return legendre(n, v.ell);
}

int CMExtension::local_eps_full(const PrimeF& v, const Elem& x) const {
  if (splitting_type(v) != SplitType::Ramified)
    throw precondition_error("local_eps needs a ramified prime");
  if (v.ell == 2) throw precondition_error("local_eps at residue characteristic 2");
  if (x.is_zero()) throw precondition_error("local_eps of zero");
  int s = F_->val(x, v);
  if (s == 0) return local_eps(v, x);
  int t = F_->val(delta_, v);  // odd by construction of D
  // tame Hilbert symbol (x, delta)_v = leg((-1)^{st} x^t delta^{-s})
  Elem u(Rational(1));
  Elem xp = x, dp = F_->inv(delta_);
  for (int i = 0; i < t; ++i) u = F_->mul(u, xp);
  int as = s < 0 ? -s : s;
  Elem dfac = s > 0 ? dp : delta_;
  for (int i = 0; i < as; ++i) u = F_->mul(u, dfac);
  if ((s * t) % 2 != 0) u = F_->neg(u);
  return local_eps(v, u);
}

const ClassGroupE& CMExtension::class_group() const {
  if (F_->kind() != FieldKind::Rational)
    throw precondition_error("class group machinery is available over Q only");
  if (!class_group_) class_group_ = std::make_unique<ClassGroupE>(delta_.a.as_integer());
  return *class_group_;
}

int CMExtension::class_index_of_prime(const EPrimeKey& k) const {
  auto it = prime_class_cache_.find(k);
  if (it != prime_class_cache_.end()) return it->second;
  const ClassGroupE& G = class_group();
  const PrimeF& P = F_->prime(k.below);
  long long disc = G.disc();
  int idx;
  switch (splitting_type(P)) {
    case SplitType::Inert: idx = G.identity(); break;
    case SplitType::Ramified: {
      long long ell = P.ell;
      long long b = ell;  // disc odd here, so b = ell works: b^2 = disc mod 4*ell
      idx = G.index_of({ell, b, (b * b - disc) / (4 * ell)});
      break;
    }
    case SplitType::Split: {
      long long ell = P.ell;
      // roots of b^2 = disc mod 4*ell with the right parity
      long long b = -1;
      for (long long cand = mod_pos(disc, 2); cand < 2 * ell; cand += 2)
        if (mod_pos(cand * cand - disc, 4 * ell) == 0) {
          b = cand;
          break;
        }
      if (b < 0) throw arithmetic_error("no form root at a split prime");
      long long bk = k.slot == 0 ? b : -b;
      idx = G.index_of(reduce_form({ell, bk, ((bk * bk - disc) / (4 * ell))}));
      break;
    }
    default: throw arithmetic_error("unreachable");
  }
  prime_class_cache_[k] = idx;
  return idx;
}

int CMExtension::class_index(const EIdeal& J) const {
  const ClassGroupE& G = class_group();
  int acc = G.identity();
  for (auto& [k, e] : J.exps()) {
    int c = class_index_of_prime(k);
    int step = e > 0 ? c : G.inverse(c);
    for (int i = 0; i < std::abs(e); ++i) acc = G.compose(acc, step);
  }
  return acc;
}

std::vector<std::string> CMExtension::validity_report(const IdealF& N, long long p) const {
  std::vector<std::string> bad;
  if (p % 2 == 0) bad.push_back("p must be odd");
  for (int pid : F_->primes_above(2))
    if (splitting_type(F_->prime(pid)) != SplitType::Split)
      bad.push_back("a prime above 2 does not split in E");
  for (auto& [pid, e] : N.exps())
    if (splitting_type(F_->prime(pid)) != SplitType::Split)
      bad.push_back("level prime P" + std::to_string(pid) + " does not split in E");
  for (int pid : F_->primes_above(p))
    if (splitting_type(F_->prime(pid)) != SplitType::Split)
      bad.push_back("a prime above p does not split in E");
  for (auto& [pid, e] : D_.exps()) {
    if (N.ord(pid) != 0) bad.push_back("D and N share the prime P" + std::to_string(pid));
    if (F_->prime(pid).ell == p) bad.push_back("D and p share a prime");
  }
  for (auto& [pid, e] : N.exps())
    if (F_->prime(pid).ell == p) bad.push_back("N and p share a prime");
  return bad;
}

// ---------------------------------------------------------------------------
// characters

EHeckeCharacter EHeckeCharacter::trivial(std::vector<int> modulus_support_below) {
  EHeckeCharacter chi;
  chi.modulus_support_ = std::move(modulus_support_below);
  return chi;
}

EHeckeCharacter EHeckeCharacter::cyclic_class_character(const CMExtension& E,
                                                        const BQForm& gen, int k, int m,
                                                        std::vector<int> modulus_support_below) {
  const ClassGroupE& G = E.class_group();
  EHeckeCharacter chi;
  chi.modulus_support_ = std::move(modulus_support_below);
  chi.order_ = m;
  int gi = G.index_of(gen);
  int og = G.element_order(gi);
  if ((long long)k * og % m != 0)
    throw precondition_error("character value order does not divide the generator order");
  // walk the cyclic subgroup; require it to be the whole group
  std::map<int, Coefficient> vals;
  int x = G.identity();
  for (int j = 0; j < og; ++j) {
    vals[x] = Coefficient(Cyclotomic::root_of_unity(k * j % m, m));
    x = G.compose(x, gi);
  }
  if ((int)vals.size() != G.order())
    throw precondition_error("generator does not generate the class group");
  chi.values_ = std::move(vals);
  return chi;
}

Coefficient EHeckeCharacter::eval(const CMExtension& E, const EIdeal& J) const {
  for (auto& [k, e] : J.exps())
    for (int pid : modulus_support_)
      if (k.below == pid) return Coefficient(Rational(0));
  if (!is_class_character()) return Coefficient(Rational(1));
  return values_.at(E.class_index(J));
}

}  // namespace hmfq

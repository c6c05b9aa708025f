#include "hmfq/basefield.hpp"

#include <algorithm>
#include <cmath>

namespace hmfq {

namespace {

long long isqrt_ll(long long n) {
  if (n < 0) return -1;
  long long r = (long long)std::sqrt((double)n);
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square_ll(long long n, long long* root = nullptr) {
  if (n < 0) return false;
  long long r = isqrt_ll(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

bool is_squarefree(long long n) {
  for (long long q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return false;
  return true;
}

std::vector<long long> rational_primes_up_to(long long bound) {
  std::vector<long long> out;
  if (bound < 2) return out;
  std::vector<bool> comp(bound + 1, false);
  for (long long i = 2; i <= bound; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (long long j = i * i; j <= bound; j += i) comp[j] = true;
  }
  return out;
}

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

// square root of a mod odd prime ell, or -1 (Tonelli-Shanks)
long long sqrt_mod(long long a, long long ell) {
  a = mod_pos(a, ell);
  if (a == 0) return 0;
  if (pow_mod(a, (ell - 1) / 2, ell) != 1) return -1;
  if (ell % 4 == 3) return pow_mod(a, (ell + 1) / 4, ell);
  long long q = ell - 1, s = 0;
  while (q % 2 == 0) q /= 2, ++s;
  long long z = 2;
  while (pow_mod(z, (ell - 1) / 2, ell) == 1) ++z;
  long long m = s, c = pow_mod(z, q, ell), t = pow_mod(a, q, ell),
            r = pow_mod(a, (q + 1) / 2, ell);
  while (t != 1) {
    long long i = 0, tt = t;
    while (tt != 1) tt = (__int128)tt * tt % ell, ++i;
    long long b = pow_mod(c, 1LL << (m - i - 1), ell);
    m = i;
    c = (__int128)b * b % ell;
    t = (__int128)t * c % ell;
    r = (__int128)r * b % ell;
  }
  return r;
}

}  // namespace

int kronecker(long long a, long long n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    long long am = mod_pos(a, 8);
    if (am == 3 || am == 5) result = -result;
  }
  a = mod_pos(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      long long nm = n % 8;
      if (nm == 3 || nm == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

BaseField BaseField::rationals(long long prime_bound) {
  if (prime_bound < 2) throw precondition_error("prime bound must be >= 2");
  BaseField F;
  F.kind_ = FieldKind::Rational;
  F.d_ = 0;
  F.disc_ = 1;
  F.prime_bound_ = prime_bound;
  F.fund_unit_ = Elem(Rational(1));
  F.build_prime_table();
  return F;
}

BaseField BaseField::real_quadratic(long long d, long long prime_bound) {
  if (d <= 1 || !is_squarefree(d))
    throw precondition_error("real quadratic field needs squarefree d > 1");
  if (prime_bound < 2) throw precondition_error("prime bound must be >= 2");
  BaseField F;
  F.kind_ = FieldKind::RealQuadratic;
  F.d_ = d;
  F.disc_ = (mod_pos(d, 4) == 1) ? d : 4 * d;
  F.prime_bound_ = prime_bound;

  // fundamental unit: minimal v > 0 with t^2 - d v^2 = +-1 (or +-4 on the
  // half-integer lattice when d = 1 mod 4)
  bool found = false;
  for (long long v = 1; v < 100000 && !found; ++v) {
    long long t;
    if (mod_pos(d, 4) == 1) {
      for (long long s : {-4LL, 4LL}) {
        if (is_square_ll(d * v * v + s, &t) && (t - v) % 2 == 0) {
          F.fund_unit_ = Elem(Rational(t, 2), Rational(v, 2));
          found = true;
          break;
        }
      }
    } else {
      for (long long s : {-1LL, 1LL}) {
        if (is_square_ll(d * v * v + s, &t)) {
          F.fund_unit_ = Elem(Rational(t), Rational(v));
          found = true;
          break;
        }
      }
    }
  }
  if (!found) throw precondition_error("fundamental unit search failed");
  if (!(F.norm(F.fund_unit_) == Rational(-1)))
    throw precondition_error(
        "narrow class number is not 1: fundamental unit has norm +1 (d=" +
        std::to_string(d) + ")");
  F.build_prime_table();
  F.ensure_h_plus_one();
  return F;
}

Elem BaseField::omega() const {
  if (kind_ == FieldKind::Rational) return Elem(Rational(1));
  if (mod_pos(d_, 4) == 1) return Elem(Rational(1, 2), Rational(1, 2));
  return Elem(Rational(0), Rational(1));
}

int BaseField::sign_embedding(const Elem& x, int which) const {
  // sign of a + b*sqrt(d) (which=0) or a - b*sqrt(d) (which=1)
  Rational a = x.a;
  Rational b = which == 0 ? x.b : -x.b;
  if (b.is_zero()) return a.sign();
  if (a.is_zero()) return b.sign();
  if (a.sign() == b.sign()) return a.sign();
  // compare a^2 with d b^2; signs differ so the larger magnitude wins
  Rational lhs = a * a, rhs = Rational(d_) * b * b;
  if (lhs == rhs) return 0;  // impossible for squarefree d > 1 unless x = 0
  return lhs > rhs ? a.sign() : b.sign();
}

bool BaseField::totally_positive(const Elem& x) const {
  if (sign_embedding(x, 0) <= 0) return false;
  return kind_ == FieldKind::Rational || sign_embedding(x, 1) > 0;
}

bool BaseField::is_integral(const Elem& x) const {
  if (kind_ == FieldKind::Rational) return x.b.is_zero() && x.a.is_integer();
  if (mod_pos(d_, 4) == 1) {
    Rational A = x.a + x.a, B = x.b + x.b;
    if (!A.is_integer() || !B.is_integer()) return false;
    return (A.as_integer() - B.as_integer()) % 2 == 0;
  }
  return x.a.is_integer() && x.b.is_integer();
}

void BaseField::build_prime_table() {
  std::vector<PrimeF> raw;
  for (long long ell : rational_primes_up_to(prime_bound_)) {
    if (kind_ == FieldKind::Rational) {
      PrimeF P;
      P.ell = ell;
      P.f = 1;
      P.e = 1;
      P.norm = ell;
      P.gen = Elem(Rational(ell));
      P.r_omega = 0;
      raw.push_back(P);
      continue;
    }
    int chi = kronecker(disc_, ell);
    if (chi == 1) {
      // split: two degree-1 primes distinguished by the image of omega
      long long r0, r1;
      if (ell == 2) {
        // d = 1 mod 8; omega^2 = omega + (d-1)/4, roots 0 and 1 mod 2
        r0 = 0;
        r1 = 1;
      } else if (mod_pos(d_, 4) == 1) {
        long long s = sqrt_mod(mod_pos(d_, ell), ell);
        long long half = (ell + 1) / 2;
        r0 = (__int128)(1 + s) * half % ell;
        r1 = (__int128)mod_pos(1 - s, ell) * half % ell;
      } else {
        r0 = sqrt_mod(mod_pos(d_, ell), ell);
        r1 = ell - r0;
      }
      PrimeF P0, P1;
      P0.ell = P1.ell = ell;
      P0.f = P1.f = 1;
      P0.e = P1.e = 1;
      P0.norm = P1.norm = ell;
      P0.which = 0;
      P1.which = 1;
      P0.r_omega = r0;
      P1.r_omega = r1;
      raw.push_back(P0);
      raw.push_back(P1);
    } else if (chi == -1) {
      // kept for every rational ell <= bound so the table covers ell with
      // sum e_i f_i = n, even when the norm ell^2 exceeds the bound
      PrimeF P;
      P.ell = ell;
      P.f = 2;
      P.e = 1;
      P.norm = ell * ell;
      P.gen = Elem(Rational(ell));
      raw.push_back(P);
    } else {
      PrimeF P;
      P.ell = ell;
      P.f = 1;
      P.e = 2;
      P.norm = ell;
      if (ell == 2) {
        P.r_omega = mod_pos(d_, 2);
      } else if (mod_pos(d_, 4) == 1) {
        // sqrt(d) = 0, omega = (1+0)/2
        P.r_omega = (ell + 1) / 2;
      } else {
        P.r_omega = 0;
      }
      raw.push_back(P);
    }
  }
  std::stable_sort(raw.begin(), raw.end(), [](const PrimeF& A, const PrimeF& B) {
    if (A.norm != B.norm) return A.norm < B.norm;
    if (A.ell != B.ell) return A.ell < B.ell;
    return A.which < B.which;
  });
  for (size_t i = 0; i < raw.size(); ++i) {
    raw[i].id = (int)i;
    raw[i].conj_id = (int)i;
  }
  // conjugate links for split pairs
  for (size_t i = 0; i + 1 < raw.size(); ++i)
    if (raw[i].ell == raw[i + 1].ell && raw[i].f == 1 && raw[i].e == 1 &&
        raw[i + 1].f == 1 && raw[i + 1].e == 1 && raw[i].which == 0 &&
        raw[i + 1].which == 1) {
      raw[i].conj_id = raw[i + 1].id;
      raw[i + 1].conj_id = raw[i].id;
    }
  primes_ = std::move(raw);
  if (kind_ == FieldKind::RealQuadratic) {
    for (auto& P : primes_) {
      if (P.f == 2) continue;  // inert primes are generated by ell
      if (P.e == 2 || P.which == 0) {
        P.gen = find_generator_of_norm(P.ell, 1, &P);
      }
    }
    // conjugate generators for which=1 primes
    for (auto& P : primes_)
      if (P.e == 1 && P.f == 1 && P.which == 1) P.gen = conj(primes_[P.conj_id].gen);
  }
}

// search x in O with |N(x)| = ell and positive valuation at P
Elem BaseField::find_generator_of_norm(long long ell, int, const PrimeF* P) const {
  long long Vmax = 8 * isqrt_ll(4 * ell / d_ + 4) + 16;
  bool half = mod_pos(d_, 4) == 1;
  for (long long v = 0; v <= Vmax; ++v) {
    for (int vs = 0; vs < (v == 0 ? 1 : 2); ++vs) {
      long long vv = vs == 0 ? v : -v;
      // x = u + v*omega; N = u^2 + uv + v^2(1-d)/4 (half) or u^2 - d v^2
      for (long long target : {ell, -ell}) {
        long long A = 1, B = half ? vv : 0,
                  C = half ? vv * vv * (1 - d_) / 4 : -d_ * vv * vv;
        // u^2 + B u + (C - target) = 0
        long long disc = B * B - 4 * A * (C - target);
        long long rt;
        if (!is_square_ll(disc, &rt)) continue;
        for (long long u : {(-B + rt) / 2, (-B - rt) / 2}) {
          if (u * u + B * u + (C - target) != 0) continue;
          Elem x = half ? Elem(Rational(u) + Rational(vv, 2), Rational(vv, 2))
                        : Elem(Rational(u), Rational(vv));
          if (x.is_zero()) continue;
          Rational n = norm(x);
          if (!(n == Rational(target))) continue;
          if (P) {
            // membership via the residue map when available
            long long uu, vvv;
            if (half) {
              uu = (x.a - x.b).as_integer();
              vvv = (x.b + x.b).as_integer();
            } else {
              uu = x.a.as_integer();
              vvv = x.b.as_integer();
            }
            if (mod_pos(uu + vvv * P->r_omega, ell) != 0) continue;
          }
          return x;
        }
      }
    }
  }
  throw precondition_error("no principal generator of norm " + std::to_string(ell) +
                           " found: class number is not 1?");
}

void BaseField::ensure_h_plus_one() const {
  // Minkowski bound for a real quadratic field: sqrt(disc)/2.
  long long mink = isqrt_ll(disc_) / 2 + 1;
  for (auto& P : primes_) {
    if (P.norm > mink) break;
    // gen was found during table construction (or an exception was thrown)
    Rational n = norm(P.gen);
    if (!(n == Rational(P.norm)) && !(n == Rational(-P.norm)))
      throw precondition_error("class group check failed");
  }
}

std::vector<int> BaseField::primes_above(long long ell) const {
  std::vector<int> out;
  for (auto& P : primes_)
    if (P.ell == ell) out.push_back(P.id);
  if (out.empty())
    throw precondition_error("prime " + std::to_string(ell) + " beyond the prime table");
  return out;
}

std::vector<PrimeF> BaseField::primes_up_to(long long bound) const {
  if (bound > prime_bound_)
    throw precondition_error("requested prime bound exceeds the table");
  std::vector<PrimeF> out;
  for (auto& P : primes_)
    if (P.norm <= bound) out.push_back(P);
  return out;
}

int BaseField::val(const Elem& x, const PrimeF& P) const {
  if (x.is_zero()) throw arithmetic_error("valuation of zero");
  if (kind_ == FieldKind::Rational) return val_p(x.a, P.ell);
  int t = val_p(norm(x), P.ell);
  if (P.f == 2) {
    if (t % 2) throw arithmetic_error("odd norm valuation at an inert prime");
    return t / 2;
  }
  if (P.e == 2) return t;
  // split prime: strip integer denominator, then divide by the generator
  Rational m(1);
  {
    int128 den = 1;
    den = x.a.den();
    int128 g = gcd128(den, x.b.den());
    den = checked_mul(den / g, x.b.den());
    m = Rational(den, 1);
  }
  Elem y{x.a * m, x.b * m};
  int v = -val_p(m, P.ell);
  bool halfcase = mod_pos(d_, 4) == 1;
  while (true) {
    long long u, w;
    if (halfcase) {
      u = (y.a - y.b).as_integer();
      w = (y.b + y.b).as_integer();
    } else {
      u = y.a.as_integer();
      w = y.b.as_integer();
    }
    if (mod_pos(u + (__int128)w % P.ell * P.r_omega, P.ell) != 0) break;
    // y /= gen: y * conj(gen) / N(gen)
    Elem z = mul(y, conj(P.gen));
    Rational n = norm(P.gen);
    y = {z.a / n, z.b / n};
    ++v;
  }
  return v;
}

IdealF BaseField::ideal_of(const Elem& x) const {
  if (x.is_zero()) throw arithmetic_error("zero element has no ideal");
  Rational n = norm(x);
  // factor numerator and denominator of |N(x)| over the prime table
  IdealF I;
  int128 num = n.num() < 0 ? -n.num() : n.num();
  int128 den = n.den();
  std::vector<long long> ells;
  for (auto& P : primes_) {
    if (!ells.empty() && ells.back() == P.ell) continue;
    if (num % P.ell == 0 || den % P.ell == 0) {
      ells.push_back(P.ell);
      while (num % P.ell == 0) num /= P.ell;
      while (den % P.ell == 0) den /= P.ell;
    }
  }
  if (num != 1 || den != 1)
    throw precondition_error("element norm has a prime factor beyond the prime table");
  for (long long ell : ells) {
    for (int id : primes_above(ell)) {
      int v = val(x, primes_[id]);
      if (v != 0) I = I * IdealF::prime(id, v);
    }
  }
  return I;
}

Rational BaseField::ideal_norm(const IdealF& I) const {
  Rational n(1);
  for (auto& [p, e] : I.exps()) n *= Rational(primes_.at(p).norm).pow(e);
  return n;
}

long long BaseField::ideal_norm_ll(const IdealF& I) const {
  Rational n = ideal_norm(I);
  int128 v = n.as_integer();
  if (v > (int128)4e18) throw overflow_error("ideal norm too large");
  return (long long)v;
}

Elem BaseField::generator(const IdealF& I) const {
  Elem g(Rational(1));
  for (auto& [p, e] : I.exps()) {
    const PrimeF& P = primes_.at(p);
    Elem pk(Rational(1));
    for (int i = 0; i < std::abs(e); ++i) pk = mul(pk, P.gen);
    g = e > 0 ? mul(g, pk) : div(g, pk);
  }
  return g;
}

Elem BaseField::totally_positive_generator(const IdealF& I) const {
  Elem g = generator(I);
  if (kind_ == FieldKind::Rational) {
    if (g.a.sign() < 0) g = neg(g);
    return g;
  }
  if (norm(g).sign() < 0) g = mul(g, fund_unit_);  // fundamental unit has norm -1
  if (sign_embedding(g, 0) < 0) g = neg(g);
  if (!totally_positive(g)) throw arithmetic_error("failed to make generator totally positive");
  return g;
}

std::vector<IdealF> BaseField::divisors(const IdealF& I) const {
  if (!I.is_integral()) throw precondition_error("divisors of a non-integral ideal");
  std::vector<IdealF> out{IdealF::one()};
  for (auto& [p, e] : I.exps()) {
    size_t n = out.size();
    IdealF pk;
    for (int k = 1; k <= e; ++k) {
      pk = pk * IdealF::prime(p);
      for (size_t i = 0; i < n; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

void BaseField::ensure_ideals(long long bound) const {
  if (bound > prime_bound_)
    throw precondition_error("ideal bound " + std::to_string(bound) +
                             " exceeds the prime table bound " +
                             std::to_string(prime_bound_));
  if (bound <= list_bound_) return;
  std::vector<IdealF> acc;
  // depth-first product enumeration over primes of norm <= bound; each prime
  // multiplies the running ideal, never reusing a smaller-id prime
  std::vector<const PrimeF*> ps;
  for (auto& P : primes_)
    if (P.norm <= bound) ps.push_back(&P);
  struct Frame {
    long long norm;
    IdealF I;
    size_t next;
  };
  std::vector<Frame> stack{{1, IdealF::one(), 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    acc.push_back(f.I);
    for (size_t i = f.next; i < ps.size(); ++i) {
      if (f.norm > bound / ps[i]->norm) break;
      stack.push_back({f.norm * ps[i]->norm, f.I * IdealF::prime(ps[i]->id), i});
    }
  }
  std::sort(acc.begin(), acc.end(), [&](const IdealF& A, const IdealF& B) {
    return canonical_less(A, B);
  });
  ideal_list_ = std::move(acc);
  list_bound_ = bound;
  ideal_norms_.clear();
  ideal_norms_.reserve(ideal_list_.size());
  for (auto& I : ideal_list_) ideal_norms_.push_back(ideal_norm_ll(I));
  ideal_index_.clear();
  ideal_index_.reserve(ideal_list_.size());
  for (size_t i = 0; i < ideal_list_.size(); ++i)
    ideal_index_.push_back({ideal_list_[i], (long long)i});
  std::sort(ideal_index_.begin(), ideal_index_.end(),
            [](auto& A, auto& B) { return A.first < B.first; });
}

long long BaseField::ideal_count(long long bound) const {
  if (bound < 1) return 0;
  ensure_ideals(bound);
  return std::upper_bound(ideal_norms_.begin(), ideal_norms_.end(), bound) -
         ideal_norms_.begin();
}

long long BaseField::ideal_index(const IdealF& I) const {
  auto it = std::lower_bound(ideal_index_.begin(), ideal_index_.end(), I,
                             [](const auto& A, const IdealF& J) { return A.first < J; });
  if (it == ideal_index_.end() || !(it->first == I))
    throw precondition_error("ideal " + I.str() + " outside the enumerated range");
  return it->second;
}

bool BaseField::canonical_less(const IdealF& A, const IdealF& B) const {
  long long na = ideal_norm_ll(A), nb = ideal_norm_ll(B);
  if (na != nb) return na < nb;
  return A.exps() < B.exps();
}

std::vector<ConvexCombination> BaseField::convex_lattice_points(
    const IdealF& I, bool include_boundary) const {
  if (!I.is_integral())
    throw precondition_error("convex enumeration needs the inverse of an integral ideal");
  std::vector<ConvexCombination> out;
  if (include_boundary) {
    out.push_back({Elem(Rational(0)), Elem(Rational(1)), true});
    out.push_back({Elem(Rational(1)), Elem(Rational(0)), true});
  }
  if (kind_ == FieldKind::Rational) {
    long long m = ideal_norm_ll(I);
    for (long long k = 1; k < m; ++k) {
      Elem a(Rational(k, m));
      out.push_back({a, Elem(Rational(m - k, m)), false});
    }
    return out;
  }
  Elem g = totally_positive_generator(I);
  // conservative floating bounds, then exact sign tests
  double sd = std::sqrt((double)d_);
  auto embed = [&](const Elem& x, int which) {
    double b = x.b.num() / (double)x.b.den();
    double a = x.a.num() / (double)x.a.den();
    return a + (which == 0 ? b * sd : -b * sd);
  };
  double g0 = embed(g, 0), g1 = embed(g, 1);
  bool half = mod_pos(d_, 4) == 1;
  // xi = u + v*omega, omega embeddings
  double w0 = half ? (1 + sd) / 2 : sd;
  double w1 = half ? (1 - sd) / 2 : -sd;
  long long vlo = (long long)std::floor(std::min(-g1 / (w0 - w1), 0.0) - 2);
  long long vhi = (long long)std::ceil(std::max(g0 / (w0 - w1), 0.0) + 2);
  for (long long v = vlo; v <= vhi; ++v) {
    double lo = std::max(0.0 - v * w0, 0.0 - v * w1);
    double hi = std::min(g0 - v * w0, g1 - v * w1);
    long long ulo = (long long)std::floor(lo) - 2;
    long long uhi = (long long)std::ceil(hi) + 2;
    for (long long u = ulo; u <= uhi; ++u) {
      Elem xi = half ? Elem(Rational(u) + Rational(v, 2), Rational(v, 2))
                     : Elem(Rational(u), Rational(v));
      if (xi.is_zero()) continue;
      if (!totally_positive(xi)) continue;
      Elem rest = sub(g, xi);
      if (rest.is_zero() || !totally_positive(rest)) continue;
      Elem alpha = div(xi, g);
      Elem beta = div(rest, g);
      out.push_back({alpha, beta, false});
    }
  }
  std::sort(out.begin(), out.end(), [](const ConvexCombination& A, const ConvexCombination& B) {
    if (A.boundary != B.boundary) return A.boundary && !B.boundary;
    if (!(A.alpha.a == B.alpha.a)) return A.alpha.a < B.alpha.a;
    return A.alpha.b < B.alpha.b;
  });
  return out;
}

std::pair<long long, long long> BaseField::reduce_mod(const Elem& x, const PrimeF& P) const {
  if (val(x, P) != 0) throw precondition_error("reduction of a non-unit at P");
  if (kind_ == FieldKind::Rational) {
    long long num = mod_pos((long long)(x.a.num() % P.ell), P.ell);
    long long den = mod_pos((long long)(x.a.den() % P.ell), P.ell);
    return {(__int128)num * pow_mod(den, P.ell - 2, P.ell) % P.ell, 0};
  }
  // strip all prime factors so that the remaining element is a unit of O,
  // then reduce unit and generators separately
  IdealF I = ideal_of(x);
  Elem unit = x;
  for (auto& [p, e] : I.exps()) {
    const PrimeF& Q = primes_.at(p);
    for (int i = 0; i < std::abs(e); ++i) unit = e > 0 ? div(unit, Q.gen) : mul(unit, Q.gen);
  }
  long long ell = P.ell;
  if (P.f == 2 && ell == 2)
    throw precondition_error("residue arithmetic at an inert prime above 2 is unsupported");
  auto red_integral = [&](const Elem& y) -> std::pair<long long, long long> {
    // y in O; coordinates over sqrt(d) have denominator dividing 2 (odd ell here)
    if (P.f == 1) {
      bool halfc = mod_pos(d_, 4) == 1;
      long long u, w;
      if (halfc) {
        u = (y.a - y.b).as_integer() % P.ell;
        w = (y.b + y.b).as_integer() % P.ell;
      } else {
        u = y.a.as_integer() % P.ell;
        w = y.b.as_integer() % P.ell;
      }
      long long romega = P.r_omega;
      long long c = mod_pos(u + (__int128)mod_pos(w, P.ell) * romega % P.ell, P.ell);
      return {c, 0};
    }
    long long inv2 = (ell + 1) / 2;
    auto redr = [&](const Rational& r) {
      long long num = mod_pos((long long)(r.num() % ell), ell);
      long long den = mod_pos((long long)(r.den() % ell), ell);
      if (den == 2) return (__int128)num * inv2 % ell;
      if (den == 1) return (__int128)num % ell;
      return (__int128)num * pow_mod(den, ell - 2, ell) % ell;
    };
    return {(long long)redr(y.a), (long long)redr(y.b)};
  };
  auto fmul = [&](std::pair<long long, long long> A,
                  std::pair<long long, long long> B) -> std::pair<long long, long long> {
    if (P.f == 1) return {(__int128)A.first * B.first % ell, 0};
    long long c0 = ((__int128)A.first * B.first +
                    (__int128)A.second * B.second % ell * mod_pos(d_, ell)) %
                   ell;
    long long c1 = ((__int128)A.first * B.second + (__int128)A.second * B.first) % ell;
    return {c0, c1};
  };
  auto finv = [&](std::pair<long long, long long> A) -> std::pair<long long, long long> {
    if (P.f == 1) return {pow_mod(A.first, ell - 2, ell), 0};
    // (c0 + c1 s)^{-1} = (c0 - c1 s)/(c0^2 - d c1^2)
    long long n = mod_pos((__int128)A.first * A.first % ell -
                              (__int128)A.second * A.second % ell * mod_pos(d_, ell) % ell,
                          ell);
    long long ninv = pow_mod(n, ell - 2, ell);
    return {(__int128)A.first * ninv % ell, (__int128)mod_pos(-A.second, ell) * ninv % ell};
  };
  std::pair<long long, long long> acc = red_integral(unit);
  for (auto& [p, e] : I.exps()) {
    const PrimeF& Q = primes_.at(p);
    auto gq = red_integral(Q.gen);
    auto factor = e > 0 ? gq : finv(gq);
    for (int i = 0; i < std::abs(e); ++i) acc = fmul(acc, factor);
  }
  return acc;
}

std::string BaseField::describe() const {
  if (kind_ == FieldKind::Rational) return "Q";
  return "Q(sqrt " + std::to_string(d_) + ")";
}

}  // namespace hmfq

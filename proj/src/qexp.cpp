#include "hmfq/qexp.hpp"

#include <sstream>

namespace hmfq {

QExpansion::QExpansion(std::shared_ptr<const BaseField> F, int weight, IdealF level,
                       long long bound, std::string character_id)
    : F_(std::move(F)),
      weight_(weight),
      level_(std::move(level)),
      bound_(bound),
      character_id_(std::move(character_id)) {
  if (bound_ < 0) throw precondition_error("expansion bound must be >= 0");
  coeffs_.assign(F_->ideal_count(bound_), Coefficient(Rational(0)));
}

const Coefficient& QExpansion::a(const IdealF& I) const {
  if (!I.is_integral()) throw precondition_error("coefficient index must be integral");
  long long idx = F_->ideal_index(I);
  if (idx >= size())
    throw precondition_error("coefficient at " + I.str() + " lies outside bound " +
                             std::to_string(bound_));
  return coeffs_[idx];
}

void QExpansion::set(const IdealF& I, Coefficient c) {
  long long idx = F_->ideal_index(I);
  if (idx >= size())
    throw precondition_error("coefficient at " + I.str() + " lies outside bound " +
                             std::to_string(bound_));
  coeffs_[idx] = std::move(c);
}

Coefficient QExpansion::a_or_zero_fractional(const IdealF& I) const {
  if (!I.is_integral()) return Coefficient(Rational(0));
  return a(I);
}

const IdealF& QExpansion::ideal_at(long long i) const {
  return F_->ideal_at(i);
}

QExpansion QExpansion::restrict_bound(long long new_bound) const {
  if (new_bound > bound_) throw precondition_error("cannot enlarge a truncated expansion");
  QExpansion g(F_, weight_, level_, new_bound, character_id_);
  g.a0_ = a0_;
  for (long long i = 0; i < g.size(); ++i) g.coeffs_[i] = coeffs_[i];
  return g;
}

QExpansion QExpansion::map(const std::function<Coefficient(const Coefficient&)>& f) const {
  QExpansion g = *this;
  g.a0_ = f(g.a0_);
  for (auto& c : g.coeffs_) c = f(c);
  return g;
}

QExpansion qexp_add(const QExpansion& f, const QExpansion& g) {
  if (f.F_ptr().get() != g.F_ptr().get())
    throw precondition_error("expansion addition across different fields");
  if (f.bound() != g.bound()) throw precondition_error("expansion bound mismatch");
  QExpansion h = f;
  h.set_a0(f.a0() + g.a0());
  for (long long i = 0; i < h.size(); ++i) h.set_index(i, f.at_index(i) + g.at_index(i));
  return h;
}

QExpansion qexp_scale(const Coefficient& c, const QExpansion& f) {
  QExpansion h = f;
  h.set_a0(c * f.a0());
  for (long long i = 0; i < h.size(); ++i) h.set_index(i, c * f.at_index(i));
  return h;
}

QExpansion qexp_mul(const QExpansion& f, const QExpansion& g) {
  if (f.F_ptr().get() != g.F_ptr().get())
    throw precondition_error("expansion product across different fields");
  if (f.bound() != g.bound()) throw precondition_error("expansion bound mismatch");
  if (f.a0().tag() == Coefficient::Tag::FormalLog ||
      g.a0().tag() == Coefficient::Tag::FormalLog)
    throw precondition_error("formal-log expansions cannot be multiplied");
  const BaseField& F = f.F();
  QExpansion h(f.F_ptr(), f.weight() + g.weight(), f.level() * g.level(), f.bound(),
               f.character_id() == g.character_id() ? f.character_id()
                                                    : f.character_id() + "*" + g.character_id());
  h.set_a0(f.a0() * g.a0());
  for (long long i = 0; i < h.size(); ++i) {
    const IdealF& I = h.ideal_at(i);
    Coefficient c(Rational(0));
    for (const auto& pt : F.convex_lattice_points(I, /*include_boundary=*/true)) {
      Coefficient fa = pt.boundary && pt.alpha.is_zero()
                           ? f.a0()
                           : f.a_or_zero_fractional(F.ideal_of(pt.alpha) * I);
      Coefficient gb = pt.boundary && pt.beta.is_zero()
                           ? g.a0()
                           : g.a_or_zero_fractional(F.ideal_of(pt.beta) * I);
      c += fa * gb;
    }
    h.set_index(i, c);
  }
  return h;
}

// ---------------------------------------------------------------------------
// serialization: a versioned, byte-stable text format

std::string ideal_label(const BaseField& F, const IdealF& I) {
  if (I.is_one()) return "1";
  std::string s;
  for (auto& [pid, e] : I.exps()) {
    if (!s.empty()) s += "*";
    const PrimeF& P = F.prime(pid);
    s += "p" + std::to_string(P.ell);
    if (P.f == 2) s += "i";
    if (P.e == 2) s += "r";
    if (P.which == 1) s += "b";
    else if (F.prime(pid).conj_id != pid) s += "a";
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

IdealF parse_ideal_label(const BaseField& F, const std::string& s) {
  if (s == "1") return IdealF::one();
  IdealF I;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    if (tok.empty() || tok[0] != 'p') throw precondition_error("bad ideal label: " + s);
    size_t i = 1;
    long long ell = 0;
    while (i < tok.size() && isdigit(tok[i])) ell = ell * 10 + (tok[i++] - '0');
    bool inert = false, ram = false;
    int which = 0;
    while (i < tok.size() && (tok[i] == 'i' || tok[i] == 'r' || tok[i] == 'a' || tok[i] == 'b')) {
      if (tok[i] == 'i') inert = true;
      if (tok[i] == 'r') ram = true;
      if (tok[i] == 'b') which = 1;
      ++i;
    }
    int e = 1;
    if (i < tok.size()) {
      if (tok[i] != '^') throw precondition_error("bad ideal label: " + s);
      e = std::stoi(tok.substr(i + 1));
    }
    int found = -1;
    for (int pid : F.primes_above(ell)) {
      const PrimeF& P = F.prime(pid);
      if ((P.f == 2) == inert && (P.e == 2) == ram && P.which == which) found = pid;
    }
    if (found < 0) throw precondition_error("unknown prime in label: " + tok);
    I = I * IdealF::prime(found, e);
  }
  return I;
}

std::string coefficient_label(const Coefficient& c) {
  switch (c.tag()) {
    case Coefficient::Tag::Rational: return c.rat().str();
    case Coefficient::Tag::FormalLog: return c.flog().str();
    case Coefficient::Tag::PAdic: return to_string_i128(c.padic().residue());
    case Coefficient::Tag::Cyclotomic: {
      std::string s = "z" + std::to_string(c.cyc().order()) + ":";
      const auto& v = c.cyc().coords();
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
      }
      return s;
    }
  }
  throw precondition_error("bad coefficient tag");
}

Coefficient parse_coefficient_label(const std::string& s) {
  if (s.empty()) throw precondition_error("empty coefficient");
  if (s[0] == '{') {
    FormalLog f;
    // {"log_2":"3/1",...}
    size_t i = 1;
    while (i < s.size() && s[i] != '}') {
      size_t k = s.find("\"log_", i);
      if (k == std::string::npos) break;
      k += 5;
      size_t ke = s.find('"', k);
      long long p = std::stoll(s.substr(k, ke - k));
      size_t v = s.find('"', ke + 2);
      size_t ve = s.find('"', v + 1);
      f += FormalLog::basis(p, Rational::parse(s.substr(v + 1, ve - v - 1)));
      i = ve + 1;
    }
    return Coefficient(f);
  }
  if (s[0] == 'z') {
    size_t colon = s.find(':');
    int m = std::stoi(s.substr(1, colon - 1));
    Cyclotomic acc(Rational(0), m);
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    int k = 0;
    while (std::getline(ss, tok, ',')) {
      Cyclotomic term = Cyclotomic::root_of_unity(k, m);
      acc += Cyclotomic(Rational::parse(tok), m) * term;
      ++k;
    }
    return Coefficient(acc);
  }
  return Coefficient(Rational::parse(s));
}

std::string qexp_serialize(const QExpansion& f) {
  std::ostringstream out;
  out << "hmfq-expansion v1\n";
  out << "field " << f.F().describe() << "\n";
  out << "weight " << f.weight() << "\n";
  out << "level " << ideal_label(f.F(), f.level()) << "\n";
  out << "character " << f.character_id() << "\n";
  out << "bound " << f.bound() << "\n";
  std::string tag = "rational";
  if (f.a0().tag() == Coefficient::Tag::PAdic || (f.size() && f.at_index(0).tag() == Coefficient::Tag::PAdic)) {
    const PAdic& ref = f.size() && f.at_index(0).tag() == Coefficient::Tag::PAdic
                           ? f.at_index(0).padic()
                           : f.a0().padic();
    tag = "padic:" + std::to_string(ref.p()) + "^" + std::to_string(ref.precision());
  } else if (f.size() && f.at_index(0).tag() == Coefficient::Tag::FormalLog) {
    tag = "formal-log";
  } else if (f.size() && f.at_index(0).tag() == Coefficient::Tag::Cyclotomic) {
    tag = "cyclotomic:" + std::to_string(f.at_index(0).cyc().order());
  }
  out << "tag " << tag << "\n";
  out << "a0 " << coefficient_label(f.a0()) << "\n";
  for (long long i = 0; i < f.size(); ++i)
    out << ideal_label(f.F(), f.ideal_at(i)) << " " << coefficient_label(f.at_index(i)) << "\n";
  return out.str();
}

QExpansion qexp_deserialize(const std::string& text, std::shared_ptr<const BaseField> F) {
  std::istringstream in(text);
  std::string line;
  auto expect = [&](const std::string& key) {
    if (!std::getline(in, line)) throw precondition_error("truncated expansion file");
    if (line.rfind(key + " ", 0) != 0 && line != key)
      throw precondition_error("expansion file: expected '" + key + "', got '" + line + "'");
    return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
  };
  if (!std::getline(in, line) || line != "hmfq-expansion v1")
    throw precondition_error("not an hmfq expansion file");
  std::string field = expect("field");
  if (field != F->describe())
    throw precondition_error("expansion field " + field + " does not match backend " +
                             F->describe());
  int weight = std::stoi(expect("weight"));
  IdealF level = parse_ideal_label(*F, expect("level"));
  std::string character = expect("character");
  long long bound = std::stoll(expect("bound"));
  std::string tag = expect("tag");
  QExpansion f(F, weight, level, bound, character);
  long long padic_p = 0;
  int padic_m = 0;
  if (tag.rfind("padic:", 0) == 0) {
    auto caret = tag.find('^');
    padic_p = std::stoll(tag.substr(6, caret - 6));
    padic_m = std::stoi(tag.substr(caret + 1));
  }
  auto parse_val = [&](const std::string& s) {
    Coefficient c = parse_coefficient_label(s);
    if (padic_p && c.tag() == Coefficient::Tag::Rational)
      return Coefficient(PAdic(padic_p, padic_m, c.rat().as_integer()));
    return c;
  };
  f.set_a0(parse_val(expect("a0")));
  long long count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto sp = line.find(' ');
    if (sp == std::string::npos) throw precondition_error("bad expansion record: " + line);
    IdealF I = parse_ideal_label(*F, line.substr(0, sp));
    if (F->ideal_norm_ll(I) > bound)
      throw precondition_error("record " + line.substr(0, sp) + " exceeds bound");
    f.set(I, parse_val(line.substr(sp + 1)));
    ++count;
  }
  if (count != f.size())
    throw precondition_error("expansion file has " + std::to_string(count) +
                             " records, expected " + std::to_string(f.size()));
  return f;
}

}  // namespace hmfq

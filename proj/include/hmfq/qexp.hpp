#pragma once

#include <functional>
#include <memory>

#include "hmfq/basefield.hpp"
#include "hmfq/coefficient.hpp"

namespace hmfq {

// A truncated formal q-expansion: a constant term (one scalar, narrow class
// number 1) plus one coefficient per nonzero integral ideal of norm <= bound.
// Coefficients are stored densely against the backend's canonical ideal list;
// asking for a coefficient outside the bound is a hard error, never zero.
class QExpansion {
 public:
  QExpansion(std::shared_ptr<const BaseField> F, int weight, IdealF level, long long bound,
             std::string character_id = "trivial");

  const BaseField& F() const { return *F_; }
  std::shared_ptr<const BaseField> F_ptr() const { return F_; }
  int weight() const { return weight_; }
  const IdealF& level() const { return level_; }
  long long bound() const { return bound_; }
  const std::string& character_id() const { return character_id_; }
  long long size() const { return (long long)coeffs_.size(); }

  const Coefficient& a0() const {
    if (a0_omitted_)
      throw precondition_error("constant term was declared omitted but is being consumed");
    return a0_;
  }
  void set_a0(Coefficient c) {
    a0_ = std::move(c);
    a0_omitted_ = false;
  }
  void mark_a0_omitted() { a0_omitted_ = true; }
  bool a0_omitted() const { return a0_omitted_; }

  // coefficient at a nonzero integral ideal of norm <= bound
  const Coefficient& a(const IdealF& I) const;
  void set(const IdealF& I, Coefficient c);
  // a(I) with the paper's convention that non-integral indices read as zero;
  // integral indices must still be inside the bound
  Coefficient a_or_zero_fractional(const IdealF& I) const;

  const IdealF& ideal_at(long long i) const;
  const Coefficient& at_index(long long i) const { return coeffs_[i]; }
  void set_index(long long i, Coefficient c) { coeffs_[i] = std::move(c); }

  QExpansion restrict_bound(long long new_bound) const;
  QExpansion map(const std::function<Coefficient(const Coefficient&)>& f) const;

  void set_weight(int w) { weight_ = w; }
  void set_level(IdealF N) { level_ = std::move(N); }
  void set_character_id(std::string s) { character_id_ = std::move(s); }

 private:
  std::shared_ptr<const BaseField> F_;
  int weight_;
  IdealF level_;
  long long bound_;
  std::string character_id_;
  Coefficient a0_;
  bool a0_omitted_ = false;
  std::vector<Coefficient> coeffs_;
};

QExpansion qexp_add(const QExpansion& f, const QExpansion& g);
QExpansion qexp_scale(const Coefficient& c, const QExpansion& f);
QExpansion qexp_mul(const QExpansion& f, const QExpansion& g);

std::string qexp_serialize(const QExpansion& f);
QExpansion qexp_deserialize(const std::string& text, std::shared_ptr<const BaseField> F);

// canonical ideal label used by the expansion file format
std::string ideal_label(const BaseField& F, const IdealF& I);
IdealF parse_ideal_label(const BaseField& F, const std::string& s);
std::string coefficient_label(const Coefficient& c);
Coefficient parse_coefficient_label(const std::string& s);

}  // namespace hmfq

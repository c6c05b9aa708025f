#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hmfq/rational.hpp"

namespace hmfq {

// Combinatorial model of the Bruhat-Tits tree of PGL2 over a local field
// with residue size q: the (q+1)-regular tree with a distinguished line L
// indexed by Z.  Vertices are encoded canonically by their line attachment
// point and the reduced word of the off-line path: the first letter picks
// one of q-1 edges leaving the line, later letters one of q continuations.
struct TreeVertex {
  long long line_pos = 0;
  std::vector<uint8_t> word;
  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend bool operator<(const TreeVertex& a, const TreeVertex& b) {
    return std::tie(a.line_pos, a.word) < std::tie(b.line_pos, b.word);
  }
  std::string str() const {
    std::string s = "(" + std::to_string(line_pos);
    for (uint8_t c : word) s += "." + std::to_string(int(c));
    return s + ")";
  }
};

// finite multiset of vertices with integer multiplicities
class TreeDivisor {
 public:
  TreeDivisor() = default;
  void add(const TreeVertex& v, long long mult = 1) {
    if (mult == 0) return;
    auto it = m_.find(v);
    if (it == m_.end())
      m_.emplace(v, mult);
    else {
      it->second += mult;
      if (it->second == 0) m_.erase(it);
    }
  }
  const std::map<TreeVertex, long long>& support() const { return m_; }
  bool empty() const { return m_.empty(); }
  long long total_size() const {
    long long s = 0;
    for (auto& [v, m] : m_) s += m;
    return s;
  }
  bool nonnegative() const {
    for (auto& [v, m] : m_)
      if (m < 0) return false;
    return true;
  }
  friend TreeDivisor operator+(const TreeDivisor& a, const TreeDivisor& b) {
    TreeDivisor r = a;
    for (auto& [v, m] : b.m_) r.add(v, m);
    return r;
  }
  friend TreeDivisor operator-(const TreeDivisor& a, const TreeDivisor& b) {
    TreeDivisor r = a;
    for (auto& [v, m] : b.m_) r.add(v, -m);
    return r;
  }
  friend bool operator==(const TreeDivisor&, const TreeDivisor&) = default;

 private:
  std::map<TreeVertex, long long> m_;
};

class BTTree {
 public:
  BTTree(long long q, int depth_limit);

  long long q() const { return q_; }
  int depth_limit() const { return depth_limit_; }

  TreeVertex line_vertex(long long pos) const { return {pos, {}}; }
  long long distance(const TreeVertex& a, const TreeVertex& b) const;
  std::vector<TreeVertex> neighbors(const TreeVertex& v) const;
  // depth of a vertex = distance to the line
  long long depth(const TreeVertex& v) const { return (long long)v.word.size(); }

  // sphere of radius k around x
  TreeDivisor sphere(const TreeVertex& x, int k) const;
  // T(P^k): all y with d(x,y) <= k and d(x,y) = k mod 2
  TreeDivisor hecke_ball(const TreeVertex& x, int k) const;
  TreeDivisor hecke_apply(int k, const TreeDivisor& D) const;

  // translation by `steps` along the line, extended to the whole tree
  TreeVertex translate(const TreeVertex& v, long long steps) const;
  TreeDivisor frobenius_translate(const TreeDivisor& D, long long steps) const;

  struct NormRelationReport {
    TreeDivisor lhs;
    TreeDivisor rhs;
    bool equal = false;
    bool inclusions_ok = false;  // R2, R3, R4 in R1 and R2 cap R3 = R4
    long long rhs_size = 0;
    long long expected_size = 0;  // (q-1) q^{k+1}
  };
  // (T(P^{k+2}) + T(P^k))(x_B) - T(P^{k+1})(x_A + x_C) for consecutive line
  // vertices x_A, x_B, x_C, checked against the set of vertices leaving the
  // line at x_B at distance k+2
  NormRelationReport norm_relation_check(int k, long long xB_pos = 0) const;
  // negative control: deliberately non-consecutive neighbors
  NormRelationReport norm_relation_check_misaligned(int k) const;

 private:
  NormRelationReport norm_relation_core(int k, const TreeVertex& xA, const TreeVertex& xB,
                                        const TreeVertex& xC) const;
  long long q_;
  int depth_limit_;
};

}  // namespace hmfq

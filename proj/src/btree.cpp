#include "hmfq/btree.hpp"

#include <set>

namespace hmfq {

BTTree::BTTree(long long q, int depth_limit) : q_(q), depth_limit_(depth_limit) {
  if (q < 2) throw precondition_error("residue size must be >= 2");
  if (depth_limit < 1) throw precondition_error("depth limit must be >= 1");
}

long long BTTree::distance(const TreeVertex& a, const TreeVertex& b) const {
  if (a.line_pos == b.line_pos) {
    size_t c = 0;
    while (c < a.word.size() && c < b.word.size() && a.word[c] == b.word[c]) ++c;
    return (long long)(a.word.size() - c) + (long long)(b.word.size() - c);
  }
  long long gap = a.line_pos < b.line_pos ? b.line_pos - a.line_pos : a.line_pos - b.line_pos;
  return (long long)a.word.size() + gap + (long long)b.word.size();
}

std::vector<TreeVertex> BTTree::neighbors(const TreeVertex& v) const {
  std::vector<TreeVertex> out;
  if (v.word.empty()) {
    out.push_back({v.line_pos - 1, {}});
    out.push_back({v.line_pos + 1, {}});
    for (uint8_t c = 1; c < q_; ++c) out.push_back({v.line_pos, {c}});
    return out;
  }
  TreeVertex parent = v;
  parent.word.pop_back();
  out.push_back(parent);
  if ((int)v.word.size() < depth_limit_) {
    for (uint8_t c = 1; c <= q_; ++c) {
      TreeVertex child = v;
      child.word.push_back(c);
      out.push_back(child);
    }
  }
  return out;
}

TreeDivisor BTTree::sphere(const TreeVertex& x, int k) const {
  if ((long long)x.word.size() + k > depth_limit_)
    throw precondition_error("sphere radius exceeds the tree depth limit");
  TreeDivisor out;
  if (k == 0) {
    out.add(x);
    return out;
  }
  // frontier of (vertex, came-from); the tree has no cycles so this visits
  // each vertex of the sphere exactly once
  std::vector<std::pair<TreeVertex, TreeVertex>> frontier;
  for (const TreeVertex& n : neighbors(x)) frontier.push_back({n, x});
  for (int step = 1; step < k; ++step) {
    std::vector<std::pair<TreeVertex, TreeVertex>> next;
    for (auto& [v, prev] : frontier)
      for (const TreeVertex& n : neighbors(v))
        if (!(n == prev)) next.push_back({n, v});
    frontier = std::move(next);
  }
  for (auto& [v, prev] : frontier) out.add(v);
  return out;
}

TreeDivisor BTTree::hecke_ball(const TreeVertex& x, int k) const {
  TreeDivisor out;
  for (int r = k; r >= 0; r -= 2) out = out + sphere(x, r);
  return out;
}

TreeDivisor BTTree::hecke_apply(int k, const TreeDivisor& D) const {
  TreeDivisor out;
  for (auto& [v, m] : D.support()) {
    TreeDivisor ball = hecke_ball(v, k);
    for (auto& [w, one] : ball.support()) out.add(w, m * one);
  }
  return out;
}

TreeVertex BTTree::translate(const TreeVertex& v, long long steps) const {
  return {v.line_pos + steps, v.word};
}

TreeDivisor BTTree::frobenius_translate(const TreeDivisor& D, long long steps) const {
  TreeDivisor out;
  for (auto& [v, m] : D.support()) out.add(translate(v, steps), m);
  return out;
}

BTTree::NormRelationReport BTTree::norm_relation_core(int k, const TreeVertex& xA,
                                                      const TreeVertex& xB,
                                                      const TreeVertex& xC) const {
  if (k + 2 > depth_limit_)
    throw precondition_error("norm relation check needs depth_limit >= k + 2");
  TreeDivisor R1 = hecke_ball(xB, k + 2);
  TreeDivisor R2 = hecke_ball(xA, k + 1);
  TreeDivisor R3 = hecke_ball(xC, k + 1);
  TreeDivisor R4 = hecke_ball(xB, k);
  NormRelationReport rep;
  rep.lhs = R1 - R2 - R3 + R4;
  // the target: vertices at distance k+2 from xB whose geodesic to xB meets
  // the line only at xB, i.e. off-line words of length k+2 hanging at xB
  std::vector<std::vector<uint8_t>> words{{}};
  for (int step = 0; step < k + 2; ++step) {
    std::vector<std::vector<uint8_t>> next;
    for (auto& w : words) {
      uint8_t last = step == 0 ? (uint8_t)q_ : q_ + 1;  // q-1 first letters, q after
      for (uint8_t c = 1; c < last; ++c) {
        auto w2 = w;
        w2.push_back(c);
        next.push_back(std::move(w2));
      }
    }
    words = std::move(next);
  }
  for (auto& w : words) rep.rhs.add({xB.line_pos, w});
  rep.rhs_size = rep.rhs.total_size();
  long long expect = q_ - 1;
  for (int i = 0; i <= k; ++i) expect *= q_;
  rep.expected_size = expect;
  // inclusion-exclusion structure used by the trace identity
  auto subset = [](const TreeDivisor& X, const TreeDivisor& Y) {
    for (auto& [v, m] : X.support())
      if (Y.support().find(v) == Y.support().end()) return false;
    return true;
  };
  TreeDivisor R23;
  for (auto& [v, m] : R2.support())
    if (R3.support().count(v)) R23.add(v);
  rep.inclusions_ok = subset(R2, R1) && subset(R3, R1) && subset(R4, R1) && R23 == R4;
  rep.equal = rep.lhs == rep.rhs && rep.rhs_size == rep.expected_size;
  return rep;
}

BTTree::NormRelationReport BTTree::norm_relation_check(int k, long long xB_pos) const {
  return norm_relation_core(k, line_vertex(xB_pos - 1), line_vertex(xB_pos),
                            line_vertex(xB_pos + 1));
}

BTTree::NormRelationReport BTTree::norm_relation_check_misaligned(int k) const {
  // wrong neighbors on purpose: x_C is two steps away from x_B
  return norm_relation_core(k, line_vertex(-1), line_vertex(0), line_vertex(2));
}

}  // namespace hmfq

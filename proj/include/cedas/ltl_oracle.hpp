#pragma once

#include <vector>

#include "cedas/buchi.hpp"
#include "cedas/ltl.hpp"

namespace cedas {

/// Finite description of an ultimately periodic word: stem letters followed
/// by a nonempty cycle repeated forever. Letter bit i is proposition i.
struct LassoWord {
  int ap_count = 0;
  std::vector<uint32_t> stem;
  std::vector<uint32_t> cycle;

  size_t positions() const { return stem.size() + cycle.size(); }
  uint32_t letter(size_t t) const {
    return t < stem.size() ? stem[t] : cycle[t - stem.size()];
  }
  size_t next(size_t t) const { return t + 1 < positions() ? t + 1 : stem.size(); }
};

/// Direct evaluation of the satisfaction rules on a lasso word. Until is the
/// least solution of U = rhs or (lhs and X U), computed by iterating that
/// equation from false until it stabilizes over the folded positions.
/// Independent of the automaton route; used as a testing oracle.
inline bool ltl_eval_lasso(const LtlFormula& f, const LassoWord& w) {
  size_t n = w.positions();
  auto eval = [&](auto&& self, const LtlFormula& g) -> std::vector<char> {
    std::vector<char> v(n, 0);
    switch (g.op) {
      case LtlOp::True:
        std::fill(v.begin(), v.end(), 1);
        return v;
      case LtlOp::Ap:
        for (size_t t = 0; t < n; ++t) v[t] = (w.letter(t) >> g.ap) & 1u;
        return v;
      case LtlOp::Not: {
        auto c = self(self, *g.lhs);
        for (size_t t = 0; t < n; ++t) v[t] = !c[t];
        return v;
      }
      case LtlOp::And: {
        auto a = self(self, *g.lhs);
        auto b = self(self, *g.rhs);
        for (size_t t = 0; t < n; ++t) v[t] = a[t] && b[t];
        return v;
      }
      case LtlOp::Next: {
        auto c = self(self, *g.lhs);
        for (size_t t = 0; t < n; ++t) v[t] = c[w.next(t)];
        return v;
      }
      case LtlOp::Until: {
        auto a = self(self, *g.lhs);
        auto b = self(self, *g.rhs);
        bool changed = true;
        while (changed) {
          changed = false;
          for (size_t i = n; i-- > 0;) {
            char nv = b[i] || (a[i] && v[w.next(i)]);
            if (nv != v[i]) {
              v[i] = nv;
              changed = true;
            }
          }
        }
        return v;
      }
    }
    return v;
  };
  return eval(eval, f)[0] != 0;
}

/// Decides whether some run of the automaton over the lasso word visits an
/// accepting state infinitely often, by exploring the finite product of the
/// automaton with the lasso positions and hunting for a reachable cycle
/// through an accepting node. Testing oracle only.
inline bool ba_accepts_lasso(const BuchiAutomaton& a, const LassoWord& w) {
  if (a.num_states == 0) return false;
  size_t n = w.positions();
  size_t total = static_cast<size_t>(a.num_states) * n;
  auto node = [&](int q, size_t t) { return static_cast<size_t>(q) * n + t; };

  // forward reachability from (initial, position 0)
  std::vector<char> reach(total, 0);
  std::vector<size_t> work;
  reach[node(a.initial, 0)] = 1;
  work.push_back(node(a.initial, 0));
  auto expand = [&](std::vector<char>& seen, std::vector<size_t>& stack) {
    while (!stack.empty()) {
      size_t cur = stack.back();
      stack.pop_back();
      int q = static_cast<int>(cur / n);
      size_t t = cur % n;
      auto [b, e] = a.out(q);
      for (uint32_t i = b; i < e; ++i) {
        const auto& tr = a.transitions[i];
        if (!tr.label.satisfied_by_bits(w.letter(t))) continue;
        size_t nx = node(tr.dst, w.next(t));
        if (!seen[nx]) {
          seen[nx] = 1;
          stack.push_back(nx);
        }
      }
    }
  };
  expand(reach, work);

  for (size_t s = 0; s < total; ++s) {
    if (!reach[s]) continue;
    int q = static_cast<int>(s / n);
    if (!a.accepting[static_cast<size_t>(q)]) continue;
    // can s reach itself?
    std::vector<size_t> stack{s};
    std::vector<char> visited(total, 0);
    while (!stack.empty()) {
      size_t cur = stack.back();
      stack.pop_back();
      int cq = static_cast<int>(cur / n);
      size_t ct = cur % n;
      auto [b, e] = a.out(cq);
      for (uint32_t i = b; i < e; ++i) {
        const auto& tr = a.transitions[i];
        if (!tr.label.satisfied_by_bits(w.letter(ct))) continue;
        size_t nx = node(tr.dst, w.next(ct));
        if (nx == s) return true;
        if (!visited[nx]) {
          visited[nx] = 1;
          stack.push_back(nx);
        }
      }
    }
  }
  return false;
}

}  // namespace cedas

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "cedas/ltl.hpp"

namespace cedas {

/// Conjunction of proposition literals. An unconstrained proposition simply
/// does not appear. Never contains both polarities of one proposition.
struct BuchiLabel {
  std::vector<std::pair<int, bool>> literals;  // (ap id, required value), sorted

  bool satisfied_by_bits(uint32_t bits) const {
    for (auto [ap, pos] : literals)
      if (((bits >> ap) & 1u) != static_cast<uint32_t>(pos)) return false;
    return true;
  }

  bool operator==(const BuchiLabel&) const = default;
};

struct BuchiTransition {
  int src = 0, dst = 0;
  BuchiLabel label;
};

/// Nondeterministic Büchi automaton with transition-based labels: a run
/// starts in `initial` and reads the word's first letter on its first
/// transition. Transitions are stored grouped by source state.
struct BuchiAutomaton {
  int num_states = 0;
  int initial = 0;
  std::vector<BuchiTransition> transitions;
  std::vector<uint32_t> out_begin;  // CSR offsets, size num_states + 1
  std::vector<bool> accepting;

  std::pair<uint32_t, uint32_t> out(int state) const {
    return {out_begin[static_cast<size_t>(state)], out_begin[static_cast<size_t>(state) + 1]};
  }

  void build_index() {
    out_begin.assign(static_cast<size_t>(num_states) + 1, 0);
    for (const auto& t : transitions) ++out_begin[static_cast<size_t>(t.src) + 1];
    for (size_t i = 1; i < out_begin.size(); ++i) out_begin[i] += out_begin[i - 1];
    // transitions are already emitted in src-grouped order by the builder
  }
};

namespace detail {

// ---- negation normal form over an interning arena ------------------------

enum class NnfOp : uint8_t { TT, FF, Lit, And, Or, Next, Until, Release };

struct NnfNode {
  NnfOp op;
  int ap = -1;
  bool pos = true;
  int a = -1, b = -1;
};

class NnfArena {
 public:
  int add(NnfNode n) {
    auto key = std::make_tuple(static_cast<int>(n.op), n.ap, n.pos ? 1 : 0, n.a, n.b);
    auto it = intern_.find(key);
    if (it != intern_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    intern_.emplace(key, id);
    return id;
  }
  const NnfNode& at(int id) const { return nodes_[static_cast<size_t>(id)]; }

  int negated(int id) {
    const NnfNode n = at(id);
    switch (n.op) {
      case NnfOp::TT: return add({NnfOp::FF});
      case NnfOp::FF: return add({NnfOp::TT});
      case NnfOp::Lit: return add({NnfOp::Lit, n.ap, !n.pos, -1, -1});
      case NnfOp::And: return add({NnfOp::Or, -1, true, negated(n.a), negated(n.b)});
      case NnfOp::Or: return add({NnfOp::And, -1, true, negated(n.a), negated(n.b)});
      case NnfOp::Next: return add({NnfOp::Next, -1, true, negated(n.a), -1});
      case NnfOp::Until: return add({NnfOp::Release, -1, true, negated(n.a), negated(n.b)});
      case NnfOp::Release: return add({NnfOp::Until, -1, true, negated(n.a), negated(n.b)});
    }
    return -1;
  }

  int from_ltl(const LtlFormula& f) {
    switch (f.op) {
      case LtlOp::True: return add({NnfOp::TT});
      case LtlOp::Ap: return add({NnfOp::Lit, f.ap, true, -1, -1});
      case LtlOp::Not: return negated(from_ltl(*f.lhs));
      case LtlOp::And: return add({NnfOp::And, -1, true, from_ltl(*f.lhs), from_ltl(*f.rhs)});
      case LtlOp::Next: return add({NnfOp::Next, -1, true, from_ltl(*f.lhs), -1});
      case LtlOp::Until: return add({NnfOp::Until, -1, true, from_ltl(*f.lhs), from_ltl(*f.rhs)});
    }
    return -1;
  }

 private:
  std::vector<NnfNode> nodes_;
  std::map<std::tuple<int, int, int, int, int>, int> intern_;
};

// ---- tableau expansion ----------------------------------------------------

/// One tableau node under construction; `old` and `nxt` are kept sorted so
/// completed nodes can be merged on (old, nxt) identity.
struct TabNode {
  std::vector<int> incoming;  // completed node ids; 0 is the virtual initial
  std::vector<int> neu;       // obligations still to decompose
  std::vector<int> old;       // processed obligations
  std::vector<int> nxt;       // obligations passed to the successor
};

inline bool sorted_contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}
inline void sorted_insert(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

class TableauBuilder {
 public:
  explicit TableauBuilder(NnfArena& arena) : arena_(arena) {}

  /// Runs the expansion from the root obligation and returns completed nodes;
  /// ids are 1-based (0 names the virtual initial node in `incoming`).
  std::vector<TabNode> run(int root) {
    TabNode start;
    start.incoming = {0};
    start.neu = {root};
    expand(std::move(start));
    return std::move(completed_);
  }

 private:
  void expand(TabNode node) {
    if (node.neu.empty()) {
      auto key = std::make_pair(node.old, node.nxt);
      auto it = merged_.find(key);
      if (it != merged_.end()) {
        auto& inc = completed_[static_cast<size_t>(it->second) - 1].incoming;
        for (int m : node.incoming) sorted_insert(inc, m);
        return;
      }
      completed_.push_back(node);
      int id = static_cast<int>(completed_.size());
      merged_.emplace(key, id);
      TabNode succ;
      succ.incoming = {id};
      succ.neu = node.nxt;
      expand(std::move(succ));
      return;
    }
    int f = node.neu.front();
    node.neu.erase(node.neu.begin());
    if (sorted_contains(node.old, f)) {
      expand(std::move(node));
      return;
    }
    const NnfNode& n = arena_.at(f);
    switch (n.op) {
      case NnfOp::FF:
        return;  // contradiction, node discarded
      case NnfOp::TT:
        expand(std::move(node));
        return;
      case NnfOp::Lit: {
        if (sorted_contains(node.old, arena_.negated(f))) return;
        sorted_insert(node.old, f);
        expand(std::move(node));
        return;
      }
      case NnfOp::And: {
        sorted_insert(node.old, f);
        push_new(node, n.a);
        push_new(node, n.b);
        expand(std::move(node));
        return;
      }
      case NnfOp::Or: {
        TabNode right = copy_of(node);
        sorted_insert(node.old, f);
        push_new(node, n.a);
        sorted_insert(right.old, f);
        push_new(right, n.b);
        expand(std::move(node));
        expand(std::move(right));
        return;
      }
      case NnfOp::Next: {
        sorted_insert(node.old, f);
        sorted_insert(node.nxt, n.a);
        expand(std::move(node));
        return;
      }
      case NnfOp::Until: {
        // f U g  =  g  or  (f and X(f U g))
        TabNode right = copy_of(node);
        sorted_insert(node.old, f);
        push_new(node, n.a);
        sorted_insert(node.nxt, f);
        sorted_insert(right.old, f);
        push_new(right, n.b);
        expand(std::move(node));
        expand(std::move(right));
        return;
      }
      case NnfOp::Release: {
        // f R g  =  (g and f)  or  (g and X(f R g))
        TabNode right = copy_of(node);
        sorted_insert(node.old, f);
        push_new(node, n.a);
        push_new(node, n.b);
        sorted_insert(right.old, f);
        push_new(right, n.b);
        sorted_insert(right.nxt, f);
        expand(std::move(node));
        expand(std::move(right));
        return;
      }
    }
  }

  void push_new(TabNode& node, int f) {
    if (sorted_contains(node.old, f)) return;
    if (std::find(node.neu.begin(), node.neu.end(), f) == node.neu.end())
      node.neu.push_back(f);
  }

  static TabNode copy_of(const TabNode& n) { return n; }

  NnfArena& arena_;
  std::vector<TabNode> completed_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> merged_;
};

inline void collect_untils(const NnfArena& arena, int id, std::vector<int>& out,
                           std::vector<char>& seen) {
  if (seen[static_cast<size_t>(id)]) return;
  seen[static_cast<size_t>(id)] = 1;
  const NnfNode& n = arena.at(id);
  if (n.op == NnfOp::Until) out.push_back(id);
  if (n.a >= 0) collect_untils(arena, n.a, out, seen);
  if (n.b >= 0) collect_untils(arena, n.b, out, seen);
}

}  // namespace detail

/// Translates a desugared formula into a Büchi automaton accepting exactly
/// the words satisfying it. Tableau expansion of the Until/Release closure,
/// then generalized acceptance (one set per Until subformula) is reduced to
/// a single set with the usual counter construction. State numbering follows
/// the deterministic expansion and a breadth-first reachability sweep, so the
/// output is stable for a fixed input formula.
inline BuchiAutomaton ltl_to_buchi(const LtlPtr& f) {
  detail::NnfArena arena;
  int root = arena.from_ltl(*f);

  detail::TableauBuilder builder(arena);
  std::vector<detail::TabNode> nodes = builder.run(root);

  std::vector<int> untils;
  {
    std::vector<char> seen(4096, 0);
    // arena ids are dense and small; grow defensively
    size_t need = 1;
    for (const auto& n : nodes)
      for (int idv : n.old) need = std::max(need, static_cast<size_t>(idv) + 1);
    need = std::max(need, static_cast<size_t>(root) + 1);
    seen.assign(need * 2 + 2, 0);
    detail::collect_untils(arena, root, untils, seen);
  }
  int k = static_cast<int>(untils.size());

  // per-node acceptance membership for each Until set: node satisfies set j
  // when (u_j not in old) or (rhs(u_j) in old). The constant true never
  // enters old, so a trivially-satisfied right side counts as present.
  auto in_set = [&](const detail::TabNode& n, int j) {
    int u = untils[static_cast<size_t>(j)];
    if (!detail::sorted_contains(n.old, u)) return true;
    int rhs = arena.at(u).b;
    if (arena.at(rhs).op == detail::NnfOp::TT) return true;
    return detail::sorted_contains(n.old, rhs);
  };

  auto label_of = [&](const detail::TabNode& n) {
    BuchiLabel lab;
    for (int idv : n.old) {
      const auto& nn = arena.at(idv);
      if (nn.op == detail::NnfOp::Lit) lab.literals.emplace_back(nn.ap, nn.pos);
    }
    std::sort(lab.literals.begin(), lab.literals.end());
    return lab;
  };

  // successors of tableau node m = nodes whose incoming contains m
  size_t n_nodes = nodes.size();
  std::vector<std::vector<int>> succ_of(n_nodes + 1);
  for (size_t i = 0; i < n_nodes; ++i)
    for (int m : nodes[i].incoming) succ_of[static_cast<size_t>(m)].push_back(static_cast<int>(i) + 1);

  // counter advance: with all sets satisfied so far up to `base`, entering
  // node t skips every further set t already satisfies
  auto advance = [&](int base, int node_id) {
    int j = base;
    while (j < k && in_set(nodes[static_cast<size_t>(node_id) - 1], j)) ++j;
    return j;
  };

  // breadth-first construction over (node, counter) pairs; state 0 is the
  // dedicated initial state (the virtual tableau root; it has no incoming
  // transitions and is never accepting unless k == 0 and it is trivial)
  BuchiAutomaton a;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> order;
  auto state_id = [&](int node_id, int ctr) {
    auto it = index.find({node_id, ctr});
    if (it != index.end()) return it->second;
    int id = static_cast<int>(order.size()) + 1;
    index.emplace(std::make_pair(node_id, ctr), id);
    order.emplace_back(node_id, ctr);
    return id;
  };

  std::vector<BuchiTransition> pending;
  size_t head = 0;
  for (int t : succ_of[0]) {
    int ctr = advance(0, t);
    pending.push_back({0, state_id(t, ctr), label_of(nodes[static_cast<size_t>(t) - 1])});
  }
  while (head < order.size()) {
    auto [node_id, ctr] = order[head];
    int src = static_cast<int>(head) + 1;
    ++head;
    int base = (ctr == k) ? 0 : ctr;
    for (int t : succ_of[static_cast<size_t>(node_id)]) {
      int nctr = advance(base, t);
      pending.push_back({src, state_id(t, nctr), label_of(nodes[static_cast<size_t>(t) - 1])});
    }
  }

  a.num_states = static_cast<int>(order.size()) + 1;
  a.initial = 0;
  a.accepting.assign(static_cast<size_t>(a.num_states), false);
  for (size_t i = 0; i < order.size(); ++i)
    a.accepting[i + 1] = (order[i].second == k);
  std::stable_sort(pending.begin(), pending.end(),
                   [](const BuchiTransition& x, const BuchiTransition& y) { return x.src < y.src; });
  a.transitions = std::move(pending);
  a.build_index();
  return a;
}

}  // namespace cedas

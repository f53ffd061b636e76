#pragma once

#include <chrono>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cedas/encode.hpp"
#include "cedas/explore.hpp"

namespace cedas {

struct SearchStats {
  uint64_t states_stored = 0;
  uint64_t transitions_fired = 0;
  uint64_t peak_store_bytes = 0;
  double wall_seconds = 0;
  int iterations = 0;  // owcty rounds; 0 for ndfs

  std::string summary() const {
    return "states=" + std::to_string(states_stored) +
           " transitions=" + std::to_string(transitions_fired) +
           " iterations=" + std::to_string(iterations) +
           " peak_bytes=" + std::to_string(peak_store_bytes);
  }
};

struct SearchLimits {
  uint64_t max_store_bytes = uint64_t{4} << 30;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LassoStep {
  MultiState state;
  EdgeAnnotation edge;  // the edge leaving this state toward the next position
};

/// Witness of an accepting cycle: stem from an initial state into the cycle,
/// then the cycle itself. The last cycle edge leads back to cycle.front();
/// that closure is exact multi-state equality.
struct Lasso {
  std::vector<LassoStep> stem;
  std::vector<LassoStep> cycle;
};

struct Verdict {
  bool holds = true;
  std::optional<Lasso> witness;
  SearchStats stats;
};

/// Canonical-encoding keyed state store. Each multi-state is stored exactly
/// once; the first discovery records a parent edge, and together those edges
/// form the forest used for witness reconstruction.
class VisitedStore {
 public:
  struct Entry {
    MultiState state;
    int32_t parent = -1;
    EdgeAnnotation via;
    uint8_t flags = 0;
  };

  VisitedStore(const StateCodec& codec, uint64_t max_bytes)
      : codec_(&codec), max_bytes_(max_bytes) {}

  std::pair<uint32_t, bool> lookup_or_insert(const MultiState& s, int32_t parent,
                                             const EdgeAnnotation& via) {
    std::string key = codec_->encode(s);
    auto it = index_.find(key);
    if (it != index_.end()) return {it->second, true};
    bytes_ += key.size() + sizeof(Entry) + entry_overhead;
    if (bytes_ > max_bytes_) {
      throw StoreLimitError("state store exceeded " + std::to_string(max_bytes_) +
                            " bytes after " + std::to_string(entries_.size()) + " states");
    }
    uint32_t id = static_cast<uint32_t>(entries_.size());
    index_.emplace(std::move(key), id);
    entries_.push_back({s, parent, via, 0});
    return {id, false};
  }

  std::optional<uint32_t> find(const MultiState& s) const {
    auto it = index_.find(codec_->encode(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Entry& at(uint32_t id) { return entries_[id]; }
  const Entry& at(uint32_t id) const { return entries_[id]; }
  size_t size() const { return entries_.size(); }
  uint64_t bytes() const { return bytes_; }

  static constexpr uint64_t entry_overhead = 48;  // map node + bookkeeping estimate

 private:
  const StateCodec* codec_;
  uint64_t max_bytes_;
  uint64_t bytes_ = 0;
  std::unordered_map<std::string, uint32_t> index_;
  std::vector<Entry> entries_;
};

namespace detail {

constexpr uint8_t kCyan = 1;  // on the outer DFS stack
constexpr uint8_t kBlue = 2;  // outer DFS finished
constexpr uint8_t kRed = 4;   // inner DFS visited

inline void check_deadline(const SearchLimits& lim, uint64_t& tick) {
  if (((++tick) & 0x3ff) == 0 && lim.deadline &&
      std::chrono::steady_clock::now() > *lim.deadline)
    throw TimeoutError("search exceeded its time budget");
}

struct DfsFrame {
  uint32_t id;
  EdgeAnnotation edge_in;                                // edge from the frame below
  std::vector<std::pair<uint32_t, EdgeAnnotation>> children;
  size_t next = 0;
};

}  // namespace detail

/// Nested depth-first search: the classic two-color scheme with the inner
/// search seeded at accepting states in post-order of the outer search, and
/// the standard early termination when the inner search reaches a state on
/// the outer stack. Deterministic for a fixed view.
inline Verdict ndfs(const TransitionSystemView& ts, const StateCodec& codec,
                    const SearchLimits& limits = {}) {
  auto t0 = std::chrono::steady_clock::now();
  VisitedStore store(codec, limits.max_store_bytes);
  SearchStats stats;
  uint64_t tick = 0;

  auto expand = [&](uint32_t id) {
    std::vector<std::pair<uint32_t, EdgeAnnotation>> out;
    auto succs = ts.successors(store.at(id).state);
    stats.transitions_fired += succs.size();
    out.reserve(succs.size());
    for (auto& sc : succs) {
      auto [cid, present] = store.lookup_or_insert(sc.state, static_cast<int32_t>(id), sc.edge);
      (void)present;
      out.emplace_back(cid, sc.edge);
    }
    return out;
  };

  std::vector<detail::DfsFrame> blue;
  std::optional<Lasso> witness;

  // inner search from an accepting seed; returns the cycle if one closes
  auto red_search = [&](uint32_t seed) -> std::optional<std::vector<LassoStep>> {
    std::vector<detail::DfsFrame> red;
    red.push_back({seed, {}, expand(seed), 0});
    while (!red.empty()) {
      detail::check_deadline(limits, tick);
      auto& f = red.back();
      if (f.next >= f.children.size()) {
        red.pop_back();
        continue;
      }
      auto [cid, edge] = f.children[f.next++];
      uint8_t& flags = store.at(cid).flags;
      bool hit_seed = (cid == seed);
      bool hit_stack = (flags & detail::kCyan) != 0;
      if (hit_seed || hit_stack) {
        std::vector<LassoStep> cycle;
        for (size_t i = 0; i + 1 < red.size(); ++i)
          cycle.push_back({store.at(red[i].id).state, red[i + 1].edge_in});
        cycle.push_back({store.at(red.back().id).state, edge});
        if (!hit_seed) {
          // climb the outer stack from the hit state back to the seed
          size_t j = 0;
          while (blue[j].id != cid) ++j;
          for (; j + 1 < blue.size(); ++j)
            cycle.push_back({store.at(blue[j].id).state, blue[j + 1].edge_in});
        }
        return cycle;
      }
      if (flags & detail::kRed) continue;
      flags |= detail::kRed;
      red.push_back({cid, edge, expand(cid), 0});
    }
    return std::nullopt;
  };

  auto finish = [&](bool holds) {
    stats.states_stored = store.size();
    stats.peak_store_bytes = store.bytes();
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Verdict{holds, std::move(witness), stats};
  };

  for (const auto& init : ts.initial_states()) {
    auto [iid, present] = store.lookup_or_insert(init, -1, {});
    (void)present;
    if (store.at(iid).flags & (detail::kCyan | detail::kBlue)) continue;
    store.at(iid).flags |= detail::kCyan;
    blue.clear();
    blue.push_back({iid, {}, expand(iid), 0});
    while (!blue.empty()) {
      detail::check_deadline(limits, tick);
      auto& f = blue.back();
      if (f.next < f.children.size()) {
        auto [cid, edge] = f.children[f.next++];
        uint8_t& flags = store.at(cid).flags;
        if (flags & (detail::kCyan | detail::kBlue)) continue;
        flags |= detail::kCyan;
        blue.push_back({cid, edge, expand(cid), 0});
        continue;
      }
      uint32_t id = f.id;
      if (ts.is_accepting(store.at(id).state)) {
        if (auto cycle = red_search(id)) {
          Lasso l;
          for (size_t i = 0; i + 1 < blue.size(); ++i)
            l.stem.push_back({store.at(blue[i].id).state, blue[i + 1].edge_in});
          l.cycle = std::move(*cycle);
          witness = std::move(l);
          return finish(false);
        }
      }
      store.at(id).flags = static_cast<uint8_t>(
          (store.at(id).flags & ~detail::kCyan) | detail::kBlue);
      blue.pop_back();
    }
  }
  return finish(true);
}

namespace detail {

/// Successor filter used for witness extraction after owcty: inside the
/// surviving set only surviving successors are offered, so the inner cycle
/// hunt stays within the fixpoint; every accepting cycle lies inside it.
class RestrictedView : public TransitionSystemView {
 public:
  RestrictedView(const TransitionSystemView& base, const StateCodec& codec,
                 const std::unordered_map<std::string, char>& surviving)
      : base_(base), codec_(codec), surviving_(surviving) {}

  std::vector<MultiState> initial_states() const override { return base_.initial_states(); }
  std::vector<Successor> successors(const MultiState& s) const override {
    auto all = base_.successors(s);
    if (!surviving_.count(codec_.encode(s))) return all;
    std::vector<Successor> kept;
    kept.reserve(all.size());
    for (auto& sc : all)
      if (surviving_.count(codec_.encode(sc.state))) kept.push_back(std::move(sc));
    return kept;
  }
  bool is_accepting(const MultiState& s) const override { return base_.is_accepting(s); }

 private:
  const TransitionSystemView& base_;
  const StateCodec& codec_;
  const std::unordered_map<std::string, char>& surviving_;
};

}  // namespace detail

/// One-way-catch-them-young, sequential and offline: generates the full
/// reachable product graph, then alternates forward reachability from the
/// accepting states with cascading elimination of states that have no
/// predecessor inside the candidate set, until the set is stable. The
/// property is violated exactly when the fixpoint is nonempty; a witness is
/// then produced by a nested DFS restricted to the surviving set.
inline Verdict owcty(const TransitionSystemView& ts, const StateCodec& codec,
                     const SearchLimits& limits = {}) {
  auto t0 = std::chrono::steady_clock::now();
  VisitedStore store(codec, limits.max_store_bytes);
  SearchStats stats;
  uint64_t tick = 0;

  // phase 1: full reachable graph
  std::vector<std::vector<uint32_t>> succ;
  std::vector<char> accepting;
  {
    std::vector<uint32_t> queue;
    for (const auto& init : ts.initial_states()) {
      auto [id, present] = store.lookup_or_insert(init, -1, {});
      if (!present) queue.push_back(id);
    }
    size_t head = 0;
    while (head < queue.size()) {
      detail::check_deadline(limits, tick);
      uint32_t id = queue[head++];
      auto succs = ts.successors(store.at(id).state);
      stats.transitions_fired += succs.size();
      if (succ.size() <= id) succ.resize(id + 1);
      for (auto& sc : succs) {
        auto [cid, present] = store.lookup_or_insert(sc.state, static_cast<int32_t>(id), sc.edge);
        succ[id].push_back(cid);
        if (!present) queue.push_back(cid);
      }
    }
    succ.resize(store.size());
    accepting.resize(store.size());
    for (uint32_t i = 0; i < store.size(); ++i)
      accepting[i] = ts.is_accepting(store.at(i).state) ? 1 : 0;
  }

  size_t n = store.size();
  std::vector<char> in_set(n, 1);
  size_t set_size = n;

  // phase 2: fixpoint
  for (;;) {
    ++stats.iterations;
    // reach: forward closure of the accepting states within the set
    {
      std::vector<char> reach(n, 0);
      std::vector<uint32_t> stack;
      for (uint32_t i = 0; i < n; ++i)
        if (in_set[i] && accepting[i]) {
          reach[i] = 1;
          stack.push_back(i);
        }
      while (!stack.empty()) {
        detail::check_deadline(limits, tick);
        uint32_t id = stack.back();
        stack.pop_back();
        for (uint32_t t : succ[id])
          if (in_set[t] && !reach[t]) {
            reach[t] = 1;
            stack.push_back(t);
          }
      }
      in_set = std::move(reach);
    }
    // elim: cascade away states with no predecessor inside the set
    {
      std::vector<uint32_t> indeg(n, 0);
      for (uint32_t i = 0; i < n; ++i)
        if (in_set[i])
          for (uint32_t t : succ[i])
            if (in_set[t]) ++indeg[t];
      std::vector<uint32_t> worklist;
      for (uint32_t i = 0; i < n; ++i)
        if (in_set[i] && indeg[i] == 0) worklist.push_back(i);
      while (!worklist.empty()) {
        detail::check_deadline(limits, tick);
        uint32_t id = worklist.back();
        worklist.pop_back();
        in_set[id] = 0;
        for (uint32_t t : succ[id])
          if (in_set[t] && --indeg[t] == 0) worklist.push_back(t);
      }
    }
    size_t new_size = 0;
    for (char c : in_set) new_size += static_cast<size_t>(c);
    if (new_size == set_size) break;
    set_size = new_size;
    if (set_size == 0) break;
  }

  stats.states_stored = store.size();
  stats.peak_store_bytes = store.bytes();

  Verdict v;
  v.stats = stats;
  v.holds = (set_size == 0);
  if (!v.holds) {
    std::unordered_map<std::string, char> surviving;
    for (uint32_t i = 0; i < n; ++i)
      if (in_set[i]) surviving.emplace(codec.encode(store.at(i).state), 1);
    detail::RestrictedView rv(ts, codec, surviving);
    Verdict inner = ndfs(rv, codec, limits);
    if (inner.holds || !inner.witness)
      throw Error("internal: owcty fixpoint nonempty but the restricted search found no cycle");
    v.witness = std::move(inner.witness);
    v.stats.transitions_fired += inner.stats.transitions_fired;
  }
  v.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

/// Replays a lasso against a view: every consecutive pair must be reproduced
/// by successors() with the recorded annotation, the cycle must close on its
/// first state by canonical encoding, and some cycle state must accept.
inline bool lasso_replays(const Lasso& l, const TransitionSystemView& ts,
                          const StateCodec& codec) {
  if (l.cycle.empty()) return false;
  auto step_ok = [&](const LassoStep& from, const MultiState& to) {
    for (const auto& sc : ts.successors(from.state))
      if (sc.edge == from.edge && codec.encode(sc.state) == codec.encode(to)) return true;
    return false;
  };
  for (size_t i = 0; i + 1 < l.stem.size(); ++i)
    if (!step_ok(l.stem[i], l.stem[i + 1].state)) return false;
  if (!l.stem.empty() && !step_ok(l.stem.back(), l.cycle.front().state)) return false;
  for (size_t i = 0; i + 1 < l.cycle.size(); ++i)
    if (!step_ok(l.cycle[i], l.cycle[i + 1].state)) return false;
  if (!step_ok(l.cycle.back(), l.cycle.front().state)) return false;
  bool any_accepting = false;
  for (const auto& st : l.cycle) any_accepting |= ts.is_accepting(st.state);
  return any_accepting;
}

}  // namespace cedas

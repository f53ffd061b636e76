#pragma once

#include <optional>

#include "cedas/cycledetect.hpp"

namespace cedas {

/// A lasso whose data sets were pruned backwards: each position keeps only
/// the evaluations consistent with executing the rest of the lasso, with the
/// cycle's sets a fixpoint under one cycle unrolling.
struct NarrowedLasso {
  std::vector<LassoStep> stem;
  std::vector<LassoStep> cycle;
};

/// Fully explicit witness run; the cycle may unroll the symbolic cycle many
/// times before the entry evaluation recurs.
struct ConcreteRun {
  std::vector<LassoStep> stem;
  std::vector<LassoStep> cycle;
};

namespace detail {

/// Deterministic image of one member under one recorded edge: fires exactly
/// the annotated system and property transitions and requires landing on the
/// expected control part. Empty when the member cannot follow the edge.
inline std::optional<Evaluation> step_member(const ProductBinding& b, const ControlPart& from,
                                             std::span<const Value> member,
                                             const EdgeAnnotation& edge,
                                             const ControlPart& expect) {
  DataSet x(b.model->num_input_slots());
  x.push_member(member);
  MultiState s{from, std::move(x)};
  for (const auto& sc : successors_sym(b, s)) {
    if (!(sc.edge == edge)) continue;
    if (!(sc.state.control == expect)) continue;
    if (sc.state.data.size() != 1) continue;
    auto m = sc.state.data.member(0);
    return Evaluation(m.begin(), m.end());
  }
  return std::nullopt;
}

inline DataSet backward_keep(const ProductBinding& b, const LassoStep& pos,
                             const ControlPart& next_control, const DataSet& next_kept) {
  DataSet out(pos.state.data.arity());
  for (size_t i = 0; i < pos.state.data.size(); ++i) {
    auto m = pos.state.data.member(i);
    auto img = step_member(b, pos.state.control, m, pos.edge, next_control);
    if (img && next_kept.contains(*img)) out.push_member(m);
  }
  return out;
}

}  // namespace detail

/// Backward pruning over the witness lasso. The cycle is narrowed first,
/// iterating backward passes around it until the per-position sets stop
/// shrinking (they are finite and only shrink, so this terminates); the stem
/// is then narrowed in one backward pass. A position emptying out would
/// contradict the lasso's validity and is reported as an internal error.
inline NarrowedLasso narrow(const Lasso& l, const ProductBinding& b) {
  NarrowedLasso out;
  out.stem = l.stem;
  out.cycle = l.cycle;
  size_t p = out.cycle.size();

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t j = p; j-- > 0;) {
      const LassoStep& next = out.cycle[(j + 1) % p];
      DataSet kept = detail::backward_keep(b, out.cycle[j], next.state.control, next.state.data);
      if (kept.empty())
        throw Error("internal: cycle narrowing emptied position " + std::to_string(j));
      if (!(kept == out.cycle[j].state.data)) {
        out.cycle[j].state.data = std::move(kept);
        changed = true;
      }
    }
  }

  for (size_t i = out.stem.size(); i-- > 0;) {
    const LassoStep& next = i + 1 < out.stem.size()
                                ? out.stem[i + 1]
                                : out.cycle.front();
    DataSet kept = detail::backward_keep(b, out.stem[i], next.state.control, next.state.data);
    if (kept.empty())
      throw Error("internal: stem narrowing emptied position " + std::to_string(i));
    out.stem[i].state.data = std::move(kept);
  }
  return out;
}

/// Period bound for concretization: the data part lives in a product of
/// modular domains, so iterating the cycle's data transformation revisits a
/// previous value within the product of the input domain sizes. Capped.
inline uint64_t default_unroll_limit(const Model& m) {
  uint64_t n = m.input_domain_size();
  uint64_t cap = uint64_t{1} << 16;
  if (n < 1) n = 1;
  return n > cap ? cap : n;
}

/// Picks the least evaluation at the cycle entry that the narrowed stem can
/// actually produce, then simulates the cycle forward one unrolling at a
/// time until the explicit state at the entry recurs. Recurrence of any
/// previously seen entry evaluation closes the concrete cycle; unrollings
/// before it join the stem. Returns nothing when the limit is hit: the
/// caller falls back to the symbolic (narrowed) outcome.
inline std::optional<ConcreteRun> concretize(const NarrowedLasso& nl, const ProductBinding& b,
                                             uint64_t unroll_limit) {
  size_t p = nl.cycle.size();
  if (p == 0) return std::nullopt;

  // entry evaluations reachable from the narrowed stem, with stem choices
  Evaluation entry;
  std::vector<LassoStep> stem;
  if (nl.stem.empty()) {
    auto m = nl.cycle.front().state.data.member(0);  // canonical least
    entry.assign(m.begin(), m.end());
  } else {
    std::optional<Evaluation> best;
    std::optional<Evaluation> best_start;
    for (size_t i = 0; i < nl.stem.front().state.data.size(); ++i) {
      auto m0 = nl.stem.front().state.data.member(i);
      Evaluation cur(m0.begin(), m0.end());
      bool ok = true;
      for (size_t j = 0; j < nl.stem.size() && ok; ++j) {
        const ControlPart& expect = (j + 1 < nl.stem.size()) ? nl.stem[j + 1].state.control
                                                             : nl.cycle.front().state.control;
        auto img = detail::step_member(b, nl.stem[j].state.control, cur, nl.stem[j].edge, expect);
        if (!img) ok = false;
        else cur = std::move(*img);
      }
      if (!ok) continue;
      if (!best || std::lexicographical_compare(cur.begin(), cur.end(), best->begin(), best->end())) {
        best = cur;
        best_start = Evaluation(m0.begin(), m0.end());
      }
    }
    if (!best) return std::nullopt;
    entry = *best;
    // rebuild the stem with the chosen evaluation threaded through
    Evaluation cur = *best_start;
    for (size_t j = 0; j < nl.stem.size(); ++j) {
      DataSet d(b.model->num_input_slots());
      d.push_member(cur);
      stem.push_back({MultiState{nl.stem[j].state.control, std::move(d)}, nl.stem[j].edge});
      const ControlPart& expect = (j + 1 < nl.stem.size()) ? nl.stem[j + 1].state.control
                                                           : nl.cycle.front().state.control;
      auto img = detail::step_member(b, nl.stem[j].state.control, cur, nl.stem[j].edge, expect);
      cur = std::move(*img);
    }
  }

  // unroll the cycle until the entry evaluation recurs
  std::map<Evaluation, size_t> seen_at;   // entry value -> index into trail entries
  std::vector<std::vector<LassoStep>> trail;  // one unrolling each
  Evaluation cur = entry;
  for (uint64_t u = 0; u < unroll_limit; ++u) {
    auto it = seen_at.find(cur);
    if (it != seen_at.end()) {
      ConcreteRun run;
      run.stem = std::move(stem);
      for (size_t k = 0; k < it->second; ++k)
        for (auto& st : trail[k]) run.stem.push_back(std::move(st));
      for (size_t k = it->second; k < trail.size(); ++k)
        for (auto& st : trail[k]) run.cycle.push_back(std::move(st));
      return run;
    }
    seen_at.emplace(cur, trail.size());
    std::vector<LassoStep> unrolling;
    for (size_t j = 0; j < p; ++j) {
      DataSet d(b.model->num_input_slots());
      d.push_member(cur);
      unrolling.push_back({MultiState{nl.cycle[j].state.control, std::move(d)}, nl.cycle[j].edge});
      const ControlPart& expect = nl.cycle[(j + 1) % p].state.control;
      auto img = detail::step_member(b, nl.cycle[j].state.control, cur, nl.cycle[j].edge, expect);
      if (!img) throw Error("internal: narrowed cycle member cannot follow the cycle");
      cur = std::move(*img);
    }
    trail.push_back(std::move(unrolling));
  }
  auto it = seen_at.find(cur);
  if (it != seen_at.end()) {
    ConcreteRun run;
    run.stem = std::move(stem);
    for (size_t k = 0; k < it->second; ++k)
      for (auto& st : trail[k]) run.stem.push_back(std::move(st));
    for (size_t k = it->second; k < trail.size(); ++k)
      for (auto& st : trail[k]) run.cycle.push_back(std::move(st));
    return run;
  }
  return std::nullopt;
}

}  // namespace cedas

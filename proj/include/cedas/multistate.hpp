#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "cedas/model.hpp"

namespace cedas {

/// One assignment of values to all input variables, in declaration order.
using Evaluation = std::vector<Value>;

/// A canonical finite set of evaluations: lexicographically sorted and
/// duplicate-free, stored as one flat array of `arity` cells per member.
/// Arity zero is the degenerate closed-model case: the set then holds at
/// most the single empty tuple.
class DataSet {
 public:
  DataSet() = default;
  explicit DataSet(size_t arity) : arity_(arity) {}

  static DataSet of(size_t arity, std::vector<Evaluation> members) {
    DataSet d(arity);
    for (auto& m : members) d.push_member(m);
    d.canonicalize();
    return d;
  }

  size_t arity() const { return arity_; }
  size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::span<const Value> member(size_t i) const {
    return {flat_.data() + i * arity_, arity_};
  }

  /// Appends without maintaining order; call canonicalize() afterwards.
  void push_member(std::span<const Value> v) {
    flat_.insert(flat_.end(), v.begin(), v.end());
    ++count_;
  }
  void push_member(const Evaluation& v) { push_member(std::span<const Value>(v)); }

  void canonicalize() {
    if (count_ <= 1) return;
    std::vector<size_t> idx(count_);
    std::iota(idx.begin(), idx.end(), 0);
    auto cmp = [&](size_t a, size_t b) {
      return std::lexicographical_compare(
          flat_.begin() + static_cast<long>(a * arity_), flat_.begin() + static_cast<long>((a + 1) * arity_),
          flat_.begin() + static_cast<long>(b * arity_), flat_.begin() + static_cast<long>((b + 1) * arity_));
    };
    std::sort(idx.begin(), idx.end(), cmp);
    std::vector<Value> out;
    out.reserve(flat_.size());
    size_t kept = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
      if (i > 0 && !cmp(idx[i - 1], idx[i]) && !cmp(idx[i], idx[i - 1])) continue;  // duplicate
      auto m = member(idx[i]);
      out.insert(out.end(), m.begin(), m.end());
      ++kept;
    }
    flat_ = std::move(out);
    count_ = kept;
  }

  bool contains(std::span<const Value> v) const {
    size_t lo = 0, hi = count_;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      auto m = member(mid);
      if (std::lexicographical_compare(m.begin(), m.end(), v.begin(), v.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo >= count_) return arity_ == 0 && count_ > 0 && v.empty();
    auto m = member(lo);
    return std::equal(m.begin(), m.end(), v.begin(), v.end());
  }

  bool subset_of(const DataSet& other) const {
    for (size_t i = 0; i < count_; ++i)
      if (!other.contains(member(i))) return false;
    return true;
  }

  bool operator==(const DataSet& o) const {
    return arity_ == o.arity_ && count_ == o.count_ && flat_ == o.flat_;
  }

  const std::vector<Value>& flat() const { return flat_; }

 private:
  size_t arity_ = 0;
  size_t count_ = 0;
  std::vector<Value> flat_;
};

/// Merge of two canonical sets (used by the deadlock check).
inline DataSet dataset_union(const DataSet& a, const DataSet& b) {
  DataSet out(a.arity());
  for (size_t i = 0; i < a.size(); ++i) out.push_member(a.member(i));
  for (size_t i = 0; i < b.size(); ++i) out.push_member(b.member(i));
  out.canonicalize();
  return out;
}

inline DataSet dataset_difference(const DataSet& a, const DataSet& b) {
  DataSet out(a.arity());
  for (size_t i = 0; i < a.size(); ++i)
    if (!b.contains(a.member(i))) out.push_member(a.member(i));
  return out;
}

/// Cartesian product of the declared input ranges, generated directly in
/// canonical order. Fails fast when the cardinality exceeds the cap.
inline DataSet initial_dataset(std::span<const SlotInfo> input_layout,
                               uint64_t cap = uint64_t{1} << 24) {
  uint64_t card = 1;
  for (const auto& s : input_layout) {
    uint64_t d = static_cast<uint64_t>(s.hi - s.lo + 1);
    if (card > cap / d) { card = cap + 1; break; }  // saturate past the cap
    card *= d;
  }
  if (card > cap) throw CapacityError(card, cap);

  DataSet out(input_layout.size());
  if (input_layout.empty()) {
    out.push_member(Evaluation{});
    return out;
  }
  Evaluation cur(input_layout.size());
  for (size_t i = 0; i < input_layout.size(); ++i) cur[i] = static_cast<Value>(input_layout[i].lo);
  for (;;) {
    out.push_member(cur);
    size_t i = input_layout.size();
    while (i-- > 0) {
      if (cur[i] < static_cast<Value>(input_layout[i].hi)) {
        ++cur[i];
        for (size_t j = i + 1; j < input_layout.size(); ++j)
          cur[j] = static_cast<Value>(input_layout[j].lo);
        break;
      }
      if (i == 0) return out;
    }
  }
}

/// The explicit half of a state needed to evaluate expressions over a member.
struct ControlContext {
  std::span<const Value> locations;
  std::span<const Value> explicits;
};

inline EvalContext member_context(const ControlContext& ctx, std::span<const Value> member) {
  return {ctx.locations, ctx.explicits, member};
}

/// Keeps the evaluations satisfying a Boolean expression. The result is a
/// subset of the input, so canonical order is preserved for free.
/// An evaluation error is reported with the offending member attached.
inline DataSet prune(const DataSet& x, const Expr& e, const ControlContext& ctx) {
  DataSet out(x.arity());
  for (size_t i = 0; i < x.size(); ++i) {
    auto m = x.member(i);
    try {
      if (eval_bool(e, member_context(ctx, m))) out.push_member(m);
    } catch (EvalError& err) {
      err.attach_evaluation(Evaluation(m.begin(), m.end()));
      throw;
    }
  }
  return out;
}

/// Maps every evaluation through an assignment to an input variable; the
/// stored value wraps to the target's declared width. Distinct members may
/// collapse, so the result is re-canonicalized.
inline DataSet apply_assignment(const DataSet& x, const Assignment& asgn,
                                const ControlContext& ctx) {
  DataSet out(x.arity());
  Evaluation tmp;
  for (size_t i = 0; i < x.size(); ++i) {
    auto m = x.member(i);
    tmp.assign(m.begin(), m.end());
    try {
      int64_t v = eval_int(*asgn.value, member_context(ctx, m));
      tmp[static_cast<size_t>(asgn.target.slot)] = wrap_width(v, asgn.target.width);
    } catch (EvalError& err) {
      err.attach_evaluation(Evaluation(m.begin(), m.end()));
      throw;
    }
    out.push_member(tmp);
  }
  out.canonicalize();
  return out;
}

/// Splits a set by the wide-domain value of an expression. Keys are the
/// distinct values; blocks are disjoint, nonempty, and cover the input.
inline std::map<int64_t, DataSet> partition_by(const DataSet& x, const Expr& e,
                                               const ControlContext& ctx) {
  std::map<int64_t, DataSet> out;
  for (size_t i = 0; i < x.size(); ++i) {
    auto m = x.member(i);
    int64_t key;
    try {
      key = eval_int(e, member_context(ctx, m));
    } catch (EvalError& err) {
      err.attach_evaluation(Evaluation(m.begin(), m.end()));
      throw;
    }
    out.try_emplace(key, x.arity()).first->second.push_member(m);
  }
  return out;
}

/// Control half of a multi-state: process locations, explicit variable
/// values, and the property automaton state.
struct ControlPart {
  std::vector<Value> locations;
  std::vector<Value> explicits;
  int buchi_state = 0;

  bool operator==(const ControlPart&) const = default;
  auto operator<=>(const ControlPart&) const = default;
};

/// The unit of exploration: explicit control plus a set of input-variable
/// evaluations. Equality is component-wise with exact set equality on the
/// data part; subsumption never identifies two multi-states.
struct MultiState {
  ControlPart control;
  DataSet data;

  bool operator==(const MultiState&) const = default;
};

}  // namespace cedas

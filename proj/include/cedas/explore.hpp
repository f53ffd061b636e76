#pragma once

#include <cassert>
#include <memory>
#include <sstream>
#include <vector>

#include "cedas/buchi.hpp"
#include "cedas/ltl.hpp"
#include "cedas/multistate.hpp"

namespace cedas {

/// Provenance of one product edge, enough to replay it: which system step
/// fired (a single process transition, a channel rendezvous pair, or the
/// stutter step of a deadlocked state) and which property transition read
/// the resulting state.
struct EdgeAnnotation {
  enum class Kind : uint8_t { Process, Rendezvous, Stutter };
  Kind kind = Kind::Process;
  int process = -1, transition = -1;                   // mover (sender for rendezvous)
  int partner_process = -1, partner_transition = -1;   // receiver
  int buchi_transition = -1;                           // index into automaton transitions

  bool operator==(const EdgeAnnotation&) const = default;
};

inline std::string annotation_str(const EdgeAnnotation& e, const Model& m) {
  std::ostringstream os;
  switch (e.kind) {
    case EdgeAnnotation::Kind::Process:
      os << m.processes[static_cast<size_t>(e.process)].name << "/t" << e.transition;
      break;
    case EdgeAnnotation::Kind::Rendezvous:
      os << m.processes[static_cast<size_t>(e.process)].name << "/t" << e.transition << "+"
         << m.processes[static_cast<size_t>(e.partner_process)].name << "/t"
         << e.partner_transition;
      break;
    case EdgeAnnotation::Kind::Stutter:
      os << "stutter";
      break;
  }
  os << " b" << e.buchi_transition;
  return os.str();
}

struct Successor {
  MultiState state;
  EdgeAnnotation edge;
};

struct ExploreOptions {
  bool self_loop_deadlocks = false;
  uint64_t eval_cap = uint64_t{1} << 24;
};

/// A model and a property automaton bound together for exploration.
struct ProductBinding {
  const Model* model = nullptr;
  const BuchiAutomaton* automaton = nullptr;
  const std::vector<AtomicProposition>* aps = nullptr;
  ExploreOptions options;
};

namespace detail {

inline ControlContext control_context(const ControlPart& c) {
  return {c.locations, c.explicits};
}

/// Keeps the members whose post-state satisfies every literal of the label.
inline DataSet prune_by_label(const DataSet& x, const BuchiLabel& label,
                              const std::vector<AtomicProposition>& aps,
                              const ControlContext& post) {
  if (label.literals.empty()) return x;
  DataSet out(x.arity());
  for (size_t i = 0; i < x.size(); ++i) {
    auto m = x.member(i);
    bool ok = true;
    for (auto [ap, pos] : label.literals) {
      if (eval_bool(*aps[static_cast<size_t>(ap)].expr, member_context(post, m)) != pos) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_member(m);
  }
  return out;
}

/// One system-step candidate: the transitions to fire, in effect order.
struct StepCandidate {
  EdgeAnnotation::Kind kind;
  int process, transition;
  int partner_process = -1, partner_transition = -1;
};

inline std::vector<StepCandidate> system_candidates(const Model& m, const ControlPart& c) {
  std::vector<StepCandidate> out;
  for (size_t p = 0; p < m.processes.size(); ++p) {
    const auto& proc = m.processes[p];
    for (size_t t = 0; t < proc.transitions.size(); ++t) {
      const auto& tr = proc.transitions[t];
      if (tr.sync) continue;
      if (c.locations[p] != static_cast<Value>(tr.from)) continue;
      out.push_back({EdgeAnnotation::Kind::Process, static_cast<int>(p), static_cast<int>(t)});
    }
  }
  for (size_t ch = 0; ch < m.channels.size(); ++ch) {
    for (size_t ps = 0; ps < m.processes.size(); ++ps) {
      const auto& sender = m.processes[ps];
      for (size_t ts = 0; ts < sender.transitions.size(); ++ts) {
        const auto& str = sender.transitions[ts];
        if (!str.sync || str.sync->channel != static_cast<int>(ch) ||
            str.sync->dir != SyncDir::Send)
          continue;
        if (c.locations[ps] != static_cast<Value>(str.from)) continue;
        for (size_t pr = 0; pr < m.processes.size(); ++pr) {
          if (pr == ps) continue;
          const auto& recv = m.processes[pr];
          for (size_t tr = 0; tr < recv.transitions.size(); ++tr) {
            const auto& rtr = recv.transitions[tr];
            if (!rtr.sync || rtr.sync->channel != static_cast<int>(ch) ||
                rtr.sync->dir != SyncDir::Recv)
              continue;
            if (c.locations[pr] != static_cast<Value>(rtr.from)) continue;
            out.push_back({EdgeAnnotation::Kind::Rendezvous, static_cast<int>(ps),
                           static_cast<int>(ts), static_cast<int>(pr), static_cast<int>(tr)});
          }
        }
      }
    }
  }
  return out;
}

/// Applies an ordered effect list to a family of (explicit cells, data set)
/// blocks, splitting blocks whenever an explicit cell receives a value that
/// depends on the input variables.
struct EffectBlock {
  std::vector<Value> explicits;
  DataSet data;
};

inline void run_effects(std::vector<EffectBlock>& blocks, const std::vector<Assignment>& effects,
                        std::span<const Value> locations) {
  for (const auto& a : effects) {
    std::vector<EffectBlock> next;
    next.reserve(blocks.size());
    for (auto& blk : blocks) {
      ControlContext ctx{locations, blk.explicits};
      if (a.target.is_input) {
        next.push_back({std::move(blk.explicits), apply_assignment(blk.data, a, ctx)});
      } else if (mentions_input(*a.value)) {
        // distinct wide values may wrap to the same stored cell; merge those
        std::map<Value, DataSet> merged;
        for (auto& [val, part] : partition_by(blk.data, *a.value, ctx)) {
          Value w = wrap_width(val, a.target.width);
          auto it = merged.find(w);
          if (it == merged.end()) merged.emplace(w, std::move(part));
          else it->second = dataset_union(it->second, part);
        }
        for (auto& [w, part] : merged) {
          EffectBlock nb{blk.explicits, std::move(part)};
          nb.explicits[static_cast<size_t>(a.target.slot)] = w;
          next.push_back(std::move(nb));
        }
      } else {
        int64_t v = eval_int(*a.value, member_context(ctx, {}));
        blk.explicits[static_cast<size_t>(a.target.slot)] = wrap_width(v, a.target.width);
        next.push_back(std::move(blk));
      }
    }
    blocks = std::move(next);
  }
}

inline std::string state_str(const MultiState& s, const Model& m) {
  std::ostringstream os;
  os << "(";
  for (size_t p = 0; p < m.processes.size(); ++p)
    os << (p ? "," : "") << m.processes[p].name << "@"
       << m.processes[p].locations[s.control.locations[p]];
  for (size_t i = 0; i < m.explicit_layout.size(); ++i)
    os << "," << m.explicit_layout[i].name << "=" << s.control.explicits[i];
  os << ",prop=" << s.control.buchi_state << ",|X|=" << s.data.size() << ")";
  return os.str();
}

}  // namespace detail

/// Successors in the set-reduced product: for each enabled system step the
/// guard prunes the data set, the effects map it (splitting on data-dependent
/// explicit writes), and each property transition whose label the resulting
/// members satisfy yields one successor per nonempty outcome. Equivalent to
/// grouping the per-evaluation successors of every member by the resulting
/// state; empty groups are dropped.
inline std::vector<Successor> successors_sym(const ProductBinding& b, const MultiState& s) {
  const Model& m = *b.model;
  const BuchiAutomaton& a = *b.automaton;
  std::vector<Successor> out;

  ControlContext pre = detail::control_context(s.control);
  DataSet enabled_union(s.data.arity());
  auto candidates = detail::system_candidates(m, s.control);

  for (const auto& cand : candidates) {
    const TransitionDef& first = m.processes[static_cast<size_t>(cand.process)]
                                     .transitions[static_cast<size_t>(cand.transition)];
    const TransitionDef* second =
        cand.kind == EdgeAnnotation::Kind::Rendezvous
            ? &m.processes[static_cast<size_t>(cand.partner_process)]
                   .transitions[static_cast<size_t>(cand.partner_transition)]
            : nullptr;
    try {
      DataSet pass = first.guard ? prune(s.data, *first.guard, pre) : s.data;
      if (second && second->guard && !pass.empty()) pass = prune(pass, *second->guard, pre);
      if (enabled_union.size() < s.data.size())
        enabled_union = dataset_union(enabled_union, pass);
      if (pass.empty()) continue;

      std::vector<Value> locs = s.control.locations;
      locs[static_cast<size_t>(cand.process)] = static_cast<Value>(first.to);
      if (second)
        locs[static_cast<size_t>(cand.partner_process)] = static_cast<Value>(second->to);

      std::vector<detail::EffectBlock> blocks;
      blocks.push_back({s.control.explicits, std::move(pass)});
      detail::run_effects(blocks, first.effects, s.control.locations);
      if (second) detail::run_effects(blocks, second->effects, s.control.locations);

      auto [tb, te] = a.out(s.control.buchi_state);
      for (auto& blk : blocks) {
        ControlContext post{locs, blk.explicits};
        for (uint32_t ti = tb; ti < te; ++ti) {
          DataSet kept = detail::prune_by_label(blk.data, a.transitions[ti].label, *b.aps, post);
          if (kept.empty()) continue;
          EdgeAnnotation e{cand.kind, cand.process, cand.transition,
                           cand.partner_process, cand.partner_transition,
                           static_cast<int>(ti)};
          out.push_back({MultiState{{locs, blk.explicits, a.transitions[ti].dst},
                                    std::move(kept)},
                         e});
        }
      }
    } catch (const EvalError& err) {
      throw VerificationError(
          "evaluation error at state " + detail::state_str(s, m) + ", transition " +
          m.processes[static_cast<size_t>(cand.process)].name + "/t" +
          std::to_string(cand.transition) + ": " + err.what());
    }
  }

  if (enabled_union.size() < s.data.size()) {
    DataSet dead = dataset_difference(s.data, enabled_union);
    if (!b.options.self_loop_deadlocks) {
      throw VerificationError("deadlock: no system transition enabled for " +
                              std::to_string(dead.size()) + " evaluation(s) of state " +
                              detail::state_str(s, m));
    }
    // stutter: the system stays put and the property reads the state again
    auto [tb, te] = a.out(s.control.buchi_state);
    for (uint32_t ti = tb; ti < te; ++ti) {
      DataSet kept = detail::prune_by_label(dead, a.transitions[ti].label, *b.aps, pre);
      if (kept.empty()) continue;
      EdgeAnnotation e{EdgeAnnotation::Kind::Stutter, -1, -1, -1, -1, static_cast<int>(ti)};
      out.push_back({MultiState{{s.control.locations, s.control.explicits,
                                 a.transitions[ti].dst},
                                std::move(kept)},
                     e});
    }
  }
  return out;
}

/// Unreduced product successors of a single-evaluation state. Shares the
/// grouping pipeline, which degenerates to per-evaluation semantics on
/// singletons: every returned state is again a singleton.
inline std::vector<Successor> successors_exp(const ProductBinding& b, const MultiState& s) {
  assert(s.data.size() == 1);
  return successors_sym(b, s);
}

inline bool is_accepting(const ProductBinding& b, const MultiState& s) {
  return b.automaton->accepting[static_cast<size_t>(s.control.buchi_state)];
}

inline ControlPart initial_control(const Model& m, const BuchiAutomaton& a) {
  ControlPart c;
  c.locations.reserve(m.processes.size());
  for (const auto& p : m.processes) c.locations.push_back(static_cast<Value>(p.initial));
  c.explicits.reserve(m.explicit_layout.size());
  for (const auto& s : m.explicit_layout) c.explicits.push_back(static_cast<Value>(s.init));
  c.buchi_state = a.initial;
  return c;
}

/// Splits a data set over the property's initial transitions: the automaton
/// reads the initial state's letter upon entering.
inline std::vector<Successor> split_by_initial_labels(const ProductBinding& b,
                                                      const ControlPart& c, const DataSet& x) {
  std::vector<Successor> out;
  ControlContext ctx{c.locations, c.explicits};
  auto [tb, te] = b.automaton->out(b.automaton->initial);
  for (uint32_t ti = tb; ti < te; ++ti) {
    DataSet kept = detail::prune_by_label(x, b.automaton->transitions[ti].label, *b.aps, ctx);
    if (kept.empty()) continue;
    EdgeAnnotation e{EdgeAnnotation::Kind::Stutter, -1, -1, -1, -1, static_cast<int>(ti)};
    out.push_back({MultiState{{c.locations, c.explicits, b.automaton->transitions[ti].dst},
                              std::move(kept)},
                   e});
  }
  return out;
}

/// Initial multi-states of the set-reduced product: the single initial
/// control part paired with the full Cartesian product of input ranges,
/// immediately split by the property's initial transition labels.
inline std::vector<MultiState> initial_multistates(const ProductBinding& b) {
  DataSet x0 = initial_dataset(b.model->input_layout, b.options.eval_cap);
  ControlPart c0 = initial_control(*b.model, *b.automaton);
  std::vector<MultiState> out;
  for (auto& s : split_by_initial_labels(b, c0, x0)) out.push_back(std::move(s.state));
  return out;
}

/// Initial singleton states of the fully explicit baseline for one
/// evaluation.
inline std::vector<MultiState> initial_exp_states(const ProductBinding& b,
                                                  std::span<const Value> evaluation) {
  ControlPart c0 = initial_control(*b.model, *b.automaton);
  DataSet x(b.model->num_input_slots());
  x.push_member(evaluation);
  std::vector<MultiState> out;
  for (auto& s : split_by_initial_labels(b, c0, x)) out.push_back(std::move(s.state));
  return out;
}

/// The refinement test of the correctness argument: an explicit state lies
/// under a multi-state when the control parts match, its evaluation is a
/// member, and the acceptance flags agree.
inline bool refines(const ProductBinding& b, const MultiState& exp_state, const MultiState& s) {
  if (exp_state.data.size() != 1) return false;
  if (!(exp_state.control == s.control)) return false;
  if (!s.data.contains(exp_state.data.member(0))) return false;
  return is_accepting(b, exp_state) == is_accepting(b, s);
}

/// Truth bitmap of every bound proposition at one member of a state.
/// Exposed for tests; bit i is proposition i.
inline uint32_t ap_bits(const ProductBinding& b, const ControlPart& c,
                        std::span<const Value> member) {
  ControlContext ctx{c.locations, c.explicits};
  uint32_t bits = 0;
  for (const auto& ap : *b.aps)
    if (eval_bool(*ap.expr, member_context(ctx, member)))
      bits |= 1u << ap.id;
  return bits;
}

/// Implicit-graph interface consumed by the cycle-detection algorithms.
class TransitionSystemView {
 public:
  virtual ~TransitionSystemView() = default;
  virtual std::vector<MultiState> initial_states() const = 0;
  virtual std::vector<Successor> successors(const MultiState& s) const = 0;
  virtual bool is_accepting(const MultiState& s) const = 0;
};

class SymView : public TransitionSystemView {
 public:
  explicit SymView(ProductBinding b) : b_(std::move(b)) {}
  std::vector<MultiState> initial_states() const override { return initial_multistates(b_); }
  std::vector<Successor> successors(const MultiState& s) const override {
    return successors_sym(b_, s);
  }
  bool is_accepting(const MultiState& s) const override { return cedas::is_accepting(b_, s); }
  const ProductBinding& binding() const { return b_; }

 private:
  ProductBinding b_;
};

/// View of the explicit baseline restricted to one input evaluation; the
/// exp-mode driver runs one search per evaluation over these.
class ExpEvalView : public TransitionSystemView {
 public:
  ExpEvalView(ProductBinding b, Evaluation evaluation)
      : b_(std::move(b)), evaluation_(std::move(evaluation)) {}
  std::vector<MultiState> initial_states() const override {
    return initial_exp_states(b_, evaluation_);
  }
  std::vector<Successor> successors(const MultiState& s) const override {
    return successors_exp(b_, s);
  }
  bool is_accepting(const MultiState& s) const override { return cedas::is_accepting(b_, s); }
  const ProductBinding& binding() const { return b_; }

 private:
  ProductBinding b_;
  Evaluation evaluation_;
};

}  // namespace cedas

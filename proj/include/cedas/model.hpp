#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cedas/expr.hpp"

namespace cedas {

/// One declared variable. Explicit variables carry an initial value; input
/// variables carry an inclusive range and are owned by the global scope only.
struct VarDecl {
  std::string name;
  Width width = Width::Byte;
  bool is_input = false;
  int64_t init = 0;           // explicit kind
  int64_t lo = 0, hi = 0;     // input kind, inclusive
  int slot = -1;              // index into the explicit or input layout
  SourceLoc loc;
};

struct ChannelDecl {
  std::string name;
  SourceLoc loc;
};

struct Assignment {
  VarRef target;
  ExprPtr value;
  SourceLoc loc;
};

enum class SyncDir : uint8_t { Send, Recv };

struct SyncRef {
  int channel = -1;
  SyncDir dir = SyncDir::Send;
};

struct TransitionDef {
  int from = -1, to = -1;       // location indices within the process
  ExprPtr guard;                // null means `true`
  std::vector<Assignment> effects;
  std::optional<SyncRef> sync;
  SourceLoc loc;
};

struct ProcessDef {
  std::string name;
  std::vector<VarDecl> locals;  // explicit kind only
  std::vector<std::string> locations;
  int initial = -1;
  std::vector<TransitionDef> transitions;
  SourceLoc loc;
};

struct ApBinding {
  std::string name;
  ExprPtr expr;
  SourceLoc loc;
};

/// Fixed cell layout of a state vector, computed by semantic analysis:
/// explicit slots are globals first, then each process's locals in
/// declaration order; input slots are the input globals in declaration order.
struct SlotInfo {
  std::string name;
  Width width = Width::Byte;
  int64_t init = 0;        // explicit slots
  int64_t lo = 0, hi = 0;  // input slots
};

struct Model {
  std::string name = "model";
  std::vector<VarDecl> globals;
  std::vector<ChannelDecl> channels;
  std::vector<ProcessDef> processes;

  std::vector<ApBinding> ap_bindings;      // #property ap name = expr;
  std::optional<std::string> ltl_text;     // #property ltl "...";

  std::vector<SlotInfo> explicit_layout;
  std::vector<SlotInfo> input_layout;

  std::vector<Diagnostic> warnings;

  size_t num_processes() const { return processes.size(); }
  size_t num_explicit_slots() const { return explicit_layout.size(); }
  size_t num_input_slots() const { return input_layout.size(); }

  /// Product of the input ranges' sizes, saturating at 2^63-1.
  uint64_t input_domain_size() const {
    uint64_t n = 1;
    for (const auto& s : input_layout) {
      uint64_t d = static_cast<uint64_t>(s.hi - s.lo + 1);
      if (n > (uint64_t{1} << 62) / (d ? d : 1)) return ~uint64_t{0} >> 1;
      n *= d;
    }
    return n;
  }
};

}  // namespace cedas

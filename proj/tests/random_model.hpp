#pragma once

// Seeded generator of small open-variable models with embedded properties,
// used by the verdict-equivalence and grouping suites. Emits model text and
// parses it, so the front end is exercised on the way.

#include <random>
#include <sstream>

#include "cedas/model_parser.hpp"

namespace cedas::test {

class RandomModelGen {
 public:
  explicit RandomModelGen(uint64_t seed) : rng_(seed) {}

  std::string generate_text() {
    std::ostringstream os;
    n_inputs_ = pick(0, 2);
    n_globals_ = pick(1, 2);
    n_procs_ = pick(1, 3);
    use_channel_ = n_procs_ >= 2 && pick(0, 9) < 3;

    input_names_.clear();
    var_names_.clear();
    // keep the total input domain at or below 16 evaluations
    int budget = 16;
    for (int i = 0; i < n_inputs_; ++i) {
      int size = pick(2, std::min(budget, i + 1 < n_inputs_ ? 4 : 16));
      int lo = pick(0, 3);
      std::string name = "in" + std::to_string(i);
      os << "input byte " << name << " = " << lo << ".." << lo + size - 1 << ";\n";
      input_names_.push_back(name);
      var_names_.push_back(name);
      budget = std::max(1, budget / size);
    }
    for (int i = 0; i < n_globals_; ++i) {
      std::string name = "g" + std::to_string(i);
      os << "byte " << name << " = " << pick(0, 5) << ";\n";
      var_names_.push_back(name);
    }
    if (use_channel_) os << "chan c0;\n";

    int sync_sender = use_channel_ ? pick(0, n_procs_ - 1) : -1;
    int sync_receiver = -1;
    if (use_channel_) {
      do {
        sync_receiver = pick(0, n_procs_ - 1);
      } while (sync_receiver == sync_sender);
    }

    for (int p = 0; p < n_procs_; ++p) {
      int n_locs = pick(2, 4);
      os << "\nprocess P" << p << " {\n";
      os << "  state";
      for (int l = 0; l < n_locs; ++l) os << (l ? ", q" : " q") << l;
      os << ";\n  init q0;\n  trans\n";
      int n_trans = pick(2, 5);
      bool sync_used = false;
      for (int t = 0; t < n_trans; ++t) {
        os << "    q" << pick(0, n_locs - 1) << " -> q" << pick(0, n_locs - 1) << " {";
        bool sync_here = (p == sync_sender || p == sync_receiver) && !sync_used && t + 1 == n_trans;
        if (pick(0, 9) < 6) os << " guard " << bool_expr(2) << ";";
        if (sync_here) {
          os << " sync c0" << (p == sync_sender ? "!" : "?") << ";";
          sync_used = true;
        }
        if (pick(0, 9) < 7) {
          os << " effect " << var_names_[static_cast<size_t>(pick(0, static_cast<int>(var_names_.size()) - 1))]
             << " = " << int_expr(2) << ";";
        }
        os << " }" << (t + 1 == n_trans ? ";" : ",") << "\n";
      }
      os << "}\n";
    }

    // one or two propositions and a small formula over them
    int n_aps = pick(1, 2);
    os << "\n";
    std::vector<std::string> ap_names;
    for (int i = 0; i < n_aps; ++i) {
      std::string name = "ap" + std::to_string(i);
      ap_names.push_back(name);
      os << "#property ap " << name << " = " << ap_expr() << ";\n";
    }
    os << "#property ltl \"" << ltl_expr(3, ap_names) << "\";\n";
    return os.str();
  }

  Model generate(const std::string& name) { return parse_model(generate_text(), name); }

 private:
  int pick(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<uint64_t>(hi - lo + 1)); }

  std::string some_var() {
    // bias toward input variables so the data part matters
    if (!input_names_.empty() && pick(0, 9) < 5)
      return input_names_[static_cast<size_t>(pick(0, static_cast<int>(input_names_.size()) - 1))];
    return var_names_[static_cast<size_t>(pick(0, static_cast<int>(var_names_.size()) - 1))];
  }

  std::string int_expr(int depth) {
    switch (depth > 0 ? pick(0, 6) : pick(0, 1)) {
      case 0: return std::to_string(pick(0, 7));
      case 1: return some_var();
      case 2: return "(" + int_expr(depth - 1) + " + " + std::to_string(pick(1, 3)) + ")";
      case 3: return "(" + int_expr(depth - 1) + " - " + std::to_string(pick(1, 3)) + ")";
      case 4: return "(" + int_expr(depth - 1) + " % " + std::to_string(pick(2, 8)) + ")";
      case 5: return "(" + int_expr(depth - 1) + " * " + std::to_string(pick(1, 3)) + ")";
      default: return "(" + int_expr(depth - 1) + " / " + std::to_string(pick(1, 4)) + ")";
    }
  }

  std::string bool_expr(int depth) {
    switch (depth > 0 ? pick(0, 5) : pick(0, 2)) {
      case 0: return some_var() + " " + cmp() + " " + std::to_string(pick(0, 8));
      case 1: return some_var() + " " + cmp() + " " + some_var();
      case 2: return "true";
      case 3: return "!(" + bool_expr(depth - 1) + ")";
      case 4: return "(" + bool_expr(depth - 1) + " && " + bool_expr(depth - 1) + ")";
      default: return "(" + bool_expr(depth - 1) + " || " + bool_expr(depth - 1) + ")";
    }
  }

  std::string cmp() {
    static const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
    return ops[pick(0, 5)];
  }

  std::string ap_expr() {
    if (pick(0, 9) < 3) {
      int p = pick(0, n_procs_ - 1);
      return "P" + std::to_string(p) + "@q" + std::to_string(pick(0, 1));
    }
    return some_var() + " " + cmp() + " " + std::to_string(pick(0, 8));
  }

  std::string ltl_expr(int depth, const std::vector<std::string>& aps) {
    if (depth == 0 || pick(0, 9) < 3)
      return aps[static_cast<size_t>(pick(0, static_cast<int>(aps.size()) - 1))];
    switch (pick(0, 7)) {
      case 0: return "! " + ltl_expr(depth - 1, aps);
      case 1: return "X " + ltl_expr(depth - 1, aps);
      case 2: return "F " + ltl_expr(depth - 1, aps);
      case 3: return "G " + ltl_expr(depth - 1, aps);
      case 4: return "(" + ltl_expr(depth - 1, aps) + " && " + ltl_expr(depth - 1, aps) + ")";
      case 5: return "(" + ltl_expr(depth - 1, aps) + " || " + ltl_expr(depth - 1, aps) + ")";
      case 6: return "(" + ltl_expr(depth - 1, aps) + " U " + ltl_expr(depth - 1, aps) + ")";
      default: return "(" + ltl_expr(depth - 1, aps) + " -> " + ltl_expr(depth - 1, aps) + ")";
    }
  }

  std::mt19937_64 rng_;
  int n_inputs_ = 0, n_globals_ = 0, n_procs_ = 0;
  bool use_channel_ = false;
  std::vector<std::string> input_names_, var_names_;
};

}  // namespace cedas::test

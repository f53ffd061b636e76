#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cedas/counterexample.hpp"
#include "cedas/ltl.hpp"
#include "cedas/model_parser.hpp"
#include "cedas/peterson.hpp"
#include "cedas/trace.hpp"

namespace cedas {

enum class Mode : uint8_t { Sym, Exp };
enum class Algorithm : uint8_t { Ndfs, Owcty };

inline const char* mode_str(Mode m) { return m == Mode::Sym ? "sym" : "exp"; }
inline const char* algorithm_str(Algorithm a) { return a == Algorithm::Ndfs ? "ndfs" : "owcty"; }

struct PropertySpec {
  std::vector<AtomicProposition> aps;
  LtlPtr formula;
  std::string text;
};

/// Collects proposition bindings from the model's `#property` blocks plus any
/// extra name=expr pairs, then parses the formula (an explicit formula wins
/// over the model's embedded one).
inline PropertySpec assemble_property(const Model& m,
                                      const std::optional<std::string>& ltl_text,
                                      const std::vector<std::pair<std::string, std::string>>&
                                          extra_aps = {}) {
  PropertySpec spec;
  std::map<std::string, int> ids;
  for (const auto& b : m.ap_bindings) {
    int id = static_cast<int>(spec.aps.size());
    ids.emplace(b.name, id);
    spec.aps.push_back({id, b.name, clone_expr(*b.expr)});
  }
  for (const auto& [name, text] : extra_aps) {
    if (ids.count(name)) throw Error("proposition `" + name + "` bound twice");
    int id = static_cast<int>(spec.aps.size());
    ids.emplace(name, id);
    spec.aps.push_back({id, name, parse_property_expr(text, m)});
  }
  if (ltl_text) spec.text = *ltl_text;
  else if (m.ltl_text) spec.text = *m.ltl_text;
  else throw Error("no LTL property: pass one or embed a `#property ltl` block");
  spec.formula = parse_ltl(spec.text, ids);
  return spec;
}

struct CheckResult {
  Verdict verdict;
  std::optional<NarrowedLasso> narrowed;
  std::optional<ConcreteRun> concrete;
  std::shared_ptr<BuchiAutomaton> automaton;  // the negated property's automaton
};

/// Verifies a model against a property: translates the negated formula,
/// explores in the requested mode and decides accepting-cycle existence.
/// Exp mode repeats the verification once per input evaluation with a fresh
/// store, the way the fully explicit baseline is defined; stored states and
/// transitions add up across all runs, the iteration count reports the worst
/// run, and the witness comes from the first violating evaluation in
/// canonical order.
inline CheckResult check_model(const Model& m, const PropertySpec& prop, Mode mode,
                               Algorithm algo, const SearchLimits& limits = {},
                               const ExploreOptions& opts = {}) {
  CheckResult res;
  res.automaton = std::make_shared<BuchiAutomaton>(ltl_to_buchi(negate(prop.formula)));
  ProductBinding binding{&m, res.automaton.get(), &prop.aps, opts};
  StateCodec codec(m, *res.automaton);
  auto run = [&](const TransitionSystemView& view) {
    return algo == Algorithm::Ndfs ? ndfs(view, codec, limits) : owcty(view, codec, limits);
  };

  if (mode == Mode::Sym) {
    SymView view(binding);
    res.verdict = run(view);
  } else {
    auto t0 = std::chrono::steady_clock::now();
    DataSet all = initial_dataset(m.input_layout, opts.eval_cap);
    Verdict agg;
    agg.holds = true;
    for (size_t i = 0; i < all.size(); ++i) {
      auto mem = all.member(i);
      ExpEvalView view(binding, Evaluation(mem.begin(), mem.end()));
      Verdict v = run(view);
      agg.stats.states_stored += v.stats.states_stored;
      agg.stats.transitions_fired += v.stats.transitions_fired;
      agg.stats.peak_store_bytes = std::max(agg.stats.peak_store_bytes, v.stats.peak_store_bytes);
      agg.stats.iterations = std::max(agg.stats.iterations, v.stats.iterations);
      if (!v.holds && agg.holds) {
        agg.holds = false;
        agg.witness = std::move(v.witness);
      }
    }
    agg.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.verdict = std::move(agg);
  }

  if (!res.verdict.holds && res.verdict.witness) {
    res.narrowed = narrow(*res.verdict.witness, binding);
    res.concrete = concretize(*res.narrowed, binding, default_unroll_limit(m));
  }
  return res;
}

// ---- command-line driver ---------------------------------------------------

struct RunConfig {
  std::string model_path;
  std::optional<std::string> ltl_text;  // may be "@file"
  std::vector<std::pair<std::string, std::string>> ap_bindings;
  Mode mode = Mode::Sym;
  Algorithm algorithm = Algorithm::Ndfs;
  uint64_t max_store_bytes = uint64_t{4} << 30;
  uint64_t max_evals = uint64_t{1} << 24;
  std::optional<std::string> trace_path;
  std::optional<std::string> stats_path;
  bool self_loop_deadlocks = false;
  std::optional<double> timeout_seconds;
};

struct StatsRow {
  std::string model;
  int64_t r = -1;  // benchmark parameter, -1 when not applicable
  Mode mode = Mode::Sym;
  Algorithm algorithm = Algorithm::Ndfs;
  std::string verdict;  // holds | violated | error
  SearchStats stats;
  std::string note;
};

inline std::string stats_csv_header() {
  return "model,r,mode,algorithm,verdict,states,transitions,iterations,"
         "wall_seconds,peak_store_bytes,note";
}

inline std::string stats_csv_row(const StatsRow& row) {
  std::ostringstream os;
  os << row.model << ',' << (row.r >= 0 ? std::to_string(row.r) : "") << ','
     << mode_str(row.mode) << ',' << algorithm_str(row.algorithm) << ',' << row.verdict << ','
     << row.stats.states_stored << ',' << row.stats.transitions_fired << ','
     << row.stats.iterations << ',' << std::fixed << std::setprecision(3)
     << row.stats.wall_seconds << ',' << row.stats.peak_store_bytes << ',' << row.note;
  return os.str();
}

struct CheckOutcome {
  enum class Status : int { Holds = 0, Violated = 1, Error = 2 };
  Status status = Status::Holds;
  std::string message;  // verdict line or diagnostic
  SearchStats stats;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

namespace detail {

inline std::string model_name_from_path(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace detail

/// Full checking pipeline behind `cedas check`: parse, negate, translate,
/// explore, and emit the verdict plus optional trace and stats files.
/// Exit status convention: 0 holds, 1 violated, 2 error.
inline CheckOutcome run_check(const RunConfig& cfg) {
  CheckOutcome out;
  try {
    std::string text = read_file(cfg.model_path);
    Model m = parse_model(text, detail::model_name_from_path(cfg.model_path));
    std::optional<std::string> ltl = cfg.ltl_text;
    if (ltl && !ltl->empty() && (*ltl)[0] == '@') ltl = read_file(ltl->substr(1));
    PropertySpec prop = assemble_property(m, ltl, cfg.ap_bindings);

    SearchLimits limits;
    limits.max_store_bytes = cfg.max_store_bytes;
    if (cfg.timeout_seconds)
      limits.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(*cfg.timeout_seconds));
    ExploreOptions opts;
    opts.self_loop_deadlocks = cfg.self_loop_deadlocks;
    opts.eval_cap = cfg.max_evals;

    CheckResult res = check_model(m, prop, cfg.mode, cfg.algorithm, limits, opts);
    out.stats = res.verdict.stats;
    out.status = res.verdict.holds ? CheckOutcome::Status::Holds : CheckOutcome::Status::Violated;
    out.message = res.verdict.holds ? "holds" : "violated";

    if (cfg.trace_path && res.narrowed) {
      ProductBinding binding{&m, res.automaton.get(), &prop.aps, opts};
      std::string txt = trace_to_text(make_trace_doc(*res.narrowed, binding));
      if (res.concrete) txt += trace_to_text(make_trace_doc(*res.concrete, binding));
      write_file(*cfg.trace_path, txt);
      nlohmann::ordered_json j;
      j["narrowed"] = trace_to_json(make_trace_doc(*res.narrowed, binding));
      if (res.concrete) j["concrete"] = trace_to_json(make_trace_doc(*res.concrete, binding));
      write_file(*cfg.trace_path + ".json", j.dump(2) + "\n");
    }
    if (cfg.stats_path) {
      StatsRow row{detail::model_name_from_path(cfg.model_path), -1, cfg.mode,
                   cfg.algorithm, out.message, out.stats, ""};
      write_file(*cfg.stats_path, stats_csv_header() + "\n" + stats_csv_row(row) + "\n");
    }
  } catch (const TimeoutError& e) {
    out.status = CheckOutcome::Status::Error;
    out.message = std::string("error: timeout: ") + e.what();
  } catch (const Error& e) {
    out.status = CheckOutcome::Status::Error;
    out.message = std::string("error: ") + e.what();
  }
  return out;
}

struct BenchConfig {
  std::vector<int64_t> r_values;
  std::vector<Mode> modes;
  Algorithm algorithm = Algorithm::Owcty;
  double timeout_seconds = 300.0;
  uint64_t max_store_bytes = uint64_t{4} << 30;
};

/// Sequential benchmark over the Peterson family: one row per (r, mode),
/// timing each verification and recording timeouts as error rows so a sweep
/// survives individual blowups.
inline std::vector<StatsRow> run_bench(const BenchConfig& cfg, std::ostream* progress = nullptr) {
  std::vector<StatsRow> rows;
  for (int64_t r : cfg.r_values) {
    std::string text = generate_peterson(r);
    Model m = parse_model(text, "peterson" + std::to_string(r));
    PropertySpec prop = assemble_property(m, std::nullopt);
    for (Mode mode : cfg.modes) {
      StatsRow row{m.name, r, mode, cfg.algorithm, "error", {}, ""};
      SearchLimits limits;
      limits.max_store_bytes = cfg.max_store_bytes;
      auto t0 = std::chrono::steady_clock::now();
      limits.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(cfg.timeout_seconds));
      try {
        CheckResult res = check_model(m, prop, mode, cfg.algorithm, limits);
        row.stats = res.verdict.stats;
        row.verdict = res.verdict.holds ? "holds" : "violated";
      } catch (const TimeoutError&) {
        row.note = "timeout";
        row.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (const Error& e) {
        std::string w = e.what();
        for (char& c : w)
          if (c == ',' || c == '\n') c = ';';
        row.note = w;
      }
      rows.push_back(row);
      if (progress)
        (*progress) << stats_csv_row(row) << "\n" << std::flush;
    }
  }
  return rows;
}

inline std::string stats_csv(const std::vector<StatsRow>& rows) {
  std::string out = stats_csv_header() + "\n";
  for (const auto& r : rows) out += stats_csv_row(r) + "\n";
  return out;
}

}  // namespace cedas

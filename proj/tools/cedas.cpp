#include <CLI11.hpp>
#include <iostream>

#include "cedas/driver.hpp"

namespace {

std::vector<int64_t> parse_r_list(const std::string& text) {
  std::vector<int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoll(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"control-explicit / data-symbolic LTL model checker"};
  app.require_subcommand(1);

  // ---- check ----
  auto* check = app.add_subcommand("check", "verify a model against an LTL property");
  cedas::RunConfig cfg;
  std::string mode_s = "sym", algo_s = "ndfs", ltl_s;
  std::vector<std::string> ap_args;
  double timeout = 0;
  check->add_option("model", cfg.model_path, "model file (.cdve)")->required();
  check->add_option("--ltl", ltl_s, "LTL formula, or @file; default: the model's #property block");
  check->add_option("--ap", ap_args, "extra proposition binding name=expr (repeatable)");
  check->add_option("--mode", mode_s, "sym | exp")->check(CLI::IsMember({"sym", "exp"}));
  check->add_option("--algorithm", algo_s, "ndfs | owcty")
      ->check(CLI::IsMember({"ndfs", "owcty"}));
  check->add_option("--trace", cfg.trace_path, "write the counterexample trace here");
  check->add_option("--stats", cfg.stats_path, "write a one-row stats CSV here");
  check->add_option("--max-store-bytes", cfg.max_store_bytes, "visited-store byte budget");
  check->add_option("--max-evals", cfg.max_evals, "cap on the initial evaluation set");
  check->add_flag("--self-loop-deadlocks", cfg.self_loop_deadlocks,
                  "stutter deadlocked states instead of failing");
  check->add_option("--timeout", timeout, "wall-clock budget in seconds");

  // ---- gen-peterson ----
  auto* gen = app.add_subcommand("gen-peterson", "emit the parameterized Peterson benchmark");
  int64_t gen_r = 2;
  std::string gen_out;
  gen->add_option("--r", gen_r, "range parameter: input l spans 0..r")->required();
  gen->add_option("-o,--output", gen_out, "output path (stdout when omitted)");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "scaling sweep over the Peterson family");
  std::string bench_r = "2,4,8", bench_modes = "sym,exp", bench_algo = "owcty", bench_out;
  double bench_timeout = 300.0;
  bench->add_option("--r", bench_r, "comma-separated r values");
  bench->add_option("--modes", bench_modes, "comma-separated subset of sym,exp");
  bench->add_option("--algorithm", bench_algo, "ndfs | owcty")
      ->check(CLI::IsMember({"ndfs", "owcty"}));
  bench->add_option("-o,--output", bench_out, "CSV output path (stdout when omitted)");
  bench->add_option("--timeout", bench_timeout, "per-run budget in seconds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      cfg.mode = mode_s == "exp" ? cedas::Mode::Exp : cedas::Mode::Sym;
      cfg.algorithm = algo_s == "owcty" ? cedas::Algorithm::Owcty : cedas::Algorithm::Ndfs;
      if (!ltl_s.empty()) cfg.ltl_text = ltl_s;
      if (timeout > 0) cfg.timeout_seconds = timeout;
      for (const auto& a : ap_args) {
        size_t eq = a.find('=');
        if (eq == std::string::npos) {
          std::cerr << "error: --ap expects name=expr, got `" << a << "`\n";
          return 2;
        }
        cfg.ap_bindings.emplace_back(a.substr(0, eq), a.substr(eq + 1));
      }
      cedas::CheckOutcome out = cedas::run_check(cfg);
      std::cout << out.message << "\n";
      if (out.status != cedas::CheckOutcome::Status::Error)
        std::cout << out.stats.summary() << "\n";
      return static_cast<int>(out.status);
    }
    if (*gen) {
      std::string text = cedas::generate_peterson(gen_r);
      if (gen_out.empty()) std::cout << text;
      else cedas::write_file(gen_out, text);
      return 0;
    }
    if (*bench) {
      cedas::BenchConfig bc;
      bc.r_values = parse_r_list(bench_r);
      for (const auto& mstr : {std::string("sym"), std::string("exp")}) {
        if (bench_modes.find(mstr) != std::string::npos)
          bc.modes.push_back(mstr == "sym" ? cedas::Mode::Sym : cedas::Mode::Exp);
      }
      bc.algorithm = bench_algo == "ndfs" ? cedas::Algorithm::Ndfs : cedas::Algorithm::Owcty;
      bc.timeout_seconds = bench_timeout;
      auto rows = cedas::run_bench(bc, &std::cerr);
      std::string csv = cedas::stats_csv(rows);
      if (bench_out.empty()) std::cout << csv;
      else cedas::write_file(bench_out, csv);
      return 0;
    }
  } catch (const cedas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

// lsweep: batch front end for the sweeping Lippmann-Schwinger solver.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lsweep/bench.hpp"
#include "lsweep/checks.hpp"
#include "lsweep/config.hpp"
#include "lsweep/krylov.hpp"

namespace fs = std::filesystem;
using namespace lsweep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;

struct Flags {
  std::string config_path;
  int workers = 1;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (f.out) c.output.dir = *f.out;
  if (f.seed) c.seed = *f.seed;
  return c;
}

std::ofstream open_out(const ExperimentConfig& c, const std::string& name) {
  fs::create_directories(c.output.dir);
  const fs::path p = fs::path(c.output.dir) / name;
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

int cmd_solve(const Flags& flags) {
  const ExperimentConfig c = resolve(flags);
  const SolveRun run = run_solve(c, flags.workers, c.output.dump_field);
  {
    auto out = open_out(c, "waves.csv");
    write_waves_csv(out, run.waves);
  }
  {
    auto out = open_out(c, "summary.csv");
    write_summary_csv(out, run.summary);
  }
  if (c.output.dump_field) {
    auto out = open_out(c, "field.csv");
    write_field_csv(out, config_grid(c, c.grid.n), run.total_field);
  }
  const SolveSummary& s = run.summary;
  std::printf("n=%d omega=%g L=%d waves=%d avg_outer=%.2f avg_inner=%.2f avg_seconds=%.3f offline=%.3f\n",
              s.n, s.omega, s.layers, s.waves, s.avg_outer, s.avg_inner, s.avg_seconds,
              s.offline_seconds);
  return s.all_converged ? kExitOk : kExitNoConvergence;
}

int cmd_sparse_bench(const Flags& flags) {
  const ExperimentConfig c = resolve(flags);
  SolveSummary s;
  const auto rows = run_sparse_bench(c, flags.workers, &s);
  auto out = open_out(c, "sparse_bench.csv");
  write_sparse_csv(out, rows);
  double gs = 0;
  for (const auto& r : rows) {
    if (r.method == "gs") gs += r.iterations;
  }
  std::printf("n=%d omega=%g L=%d waves=%d avg_bd=%.2f avg_gs=%.2f avg_bd_seconds=%.3f\n", s.n,
              s.omega, s.layers, s.waves, s.avg_inner, gs / s.waves, s.avg_seconds);
  return s.all_converged ? kExitOk : kExitNoConvergence;
}

int cmd_scaling(const Flags& flags) {
  const ExperimentConfig c = resolve(flags);
  const auto rows = run_scaling(c, flags.workers);
  {
    auto out = open_out(c, "scaling.csv");
    write_scaling_csv(out, rows);
  }
  for (const auto& r : rows) {
    std::printf("n=%d L=%d offline=%.3f online=%.3f outer=%.2f inner=%.2f sparse=%.2f\n", r.n,
                r.layers, r.offline_seconds, r.online_seconds, r.avg_outer, r.avg_inner,
                r.avg_sparse);
  }
  if (rows.size() >= 2) {
    const auto fits = scaling_fits(rows);
    auto out = open_out(c, "scaling_fit.csv");
    write_fit_csv(out, fits);
    for (const auto& f : fits) std::printf("slope %s = %.3f\n", f.quantity.c_str(), f.slope);
  }
  return kExitOk;
}

int cmd_oracle_check(const Flags& flags) {
  const ExperimentConfig c = resolve(flags);
  const auto results = run_oracle_checks(c.seed);
  auto out = open_out(c, "oracle_check.csv");
  out << "schema,check,value,threshold,passed,seconds\n";
  out.precision(6);
  bool ok = true;
  for (const auto& r : results) {
    out << kCsvSchema << ',' << r.name << ',' << r.value << ',' << r.threshold << ','
        << (r.passed ? 1 : 0) << ',' << r.seconds << '\n';
    std::printf("%-28s %s  value=%.3e threshold=%.1e\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.value, r.threshold);
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_print_config(const Flags& flags) {
  std::cout << dump_config(resolve(flags));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweeping preconditioned Lippmann-Schwinger solver"};
  app.require_subcommand(1);
  Flags flags;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--config", flags.config_path, "YAML experiment file")
      ->check(CLI::ExistingFile);
  app.add_option("--workers", flags.workers, "Incident waves solved concurrently")
      ->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random media and angle jitter");

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Flags&);
  };
  const Cmd cmds[] = {
      {"solve", "Two-level solve of every incident wave", cmd_solve},
      {"scaling", "Offline and online cost over the configured sizes", cmd_scaling},
      {"sparse-bench", "Sparsified-system study: bidirectional vs one-way sweep", cmd_sparse_bench},
      {"oracle-check", "Dense and direct cross-checks", cmd_oracle_check},
      {"print-config", "Print the effective configuration with all defaults", cmd_print_config},
  };
  for (const auto& c : cmds) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*out_opt) flags.out = out_dir;
  if (*seed_opt) flags.seed = seed;

  try {
    for (const auto& c : cmds) {
      if (app.got_subcommand(c.name)) return c.run(flags);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

// opuc: validate, run and sweep measure-spec experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "opuc/experiment.hpp"
#include "opuc/kernels.hpp"

namespace {

struct Overrides {
  std::string spec;
  std::string out;
  std::optional<std::size_t> grid_m;
  std::optional<int> n_max;
  std::string tasks;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_run_flags) {
  cmd->add_option("--spec", o.spec, "measure/experiment spec (JSON)")->required();
  if (!with_run_flags) return;
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--grid-m", o.grid_m, "grid size M (power of two)");
  cmd->add_option("--n-max", o.n_max, "largest degree");
  cmd->add_option("--tasks", o.tasks, "comma-separated task list");
  cmd->add_option("--seed", o.seed, "seed for random candidates");
  cmd->add_option("--workers", o.workers, "worker threads");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

opuc::ExperimentConfig load(const Overrides& o) {
  opuc::ExperimentConfig cfg = opuc::validate_spec(o.spec);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.grid_m) cfg.measure.M = *o.grid_m;
  if (o.n_max) cfg.n_max = *o.n_max;
  if (!o.tasks.empty()) cfg.tasks = split(o.tasks);
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  opuc::validate_config(cfg);
  return cfg;
}

int report(const opuc::RunResult& r) {
  for (const auto& c : r.checks)
    fmt::print("{} {}: {} ({})\n", c.pass ? "pass" : "FAIL", c.task, c.check, c.detail);
  for (const auto& f : r.files) fmt::print("wrote {}\n", f.string());
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials on the unit circle: polynomial-Szego experiments"};
  app.require_subcommand(1);
  Overrides ov;
  std::string param;
  std::string values;

  auto* validate = app.add_subcommand("validate", "parse a spec and print the effective settings");
  add_common(validate, ov, true);
  auto* run = app.add_subcommand("run", "run the configured tasks and write reports");
  add_common(run, ov, true);
  auto* sweep = app.add_subcommand("sweep", "run once per value of one parameter");
  add_common(sweep, ov, true);
  sweep->add_option("--param", param, "beta, n_max or M")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      const auto cfg = load(ov);
      fmt::print("{}\n", opuc::describe(cfg));
      return 0;
    }
    const auto cfg = load(ov);
    std::fprintf(stderr, "kernels: %s\n", opuc::kernels::isa_name(opuc::kernels::active_isa()));
    if (run->parsed()) return report(opuc::run_experiment(cfg));
    std::vector<double> vs;
    for (const auto& s : split(values)) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size()) throw opuc::Error(opuc::ErrorKind::configuration, fmt::format("--values: '{}' is not a number", s));
      vs.push_back(v);
    }
    return report(opuc::run_sweep(cfg, param, vs));
  } catch (const opuc::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return opuc::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

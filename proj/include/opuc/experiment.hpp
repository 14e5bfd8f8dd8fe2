#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opuc/asymptotics.hpp"
#include "opuc/measures.hpp"
#include "opuc/report.hpp"

namespace opuc {

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> t{"sumrule", "pointwise", "l2",   "arcs",        "bound",
                                          "rakhmanov", "singular", "wave", "variational", "distance"};
  return t;
}

inline constexpr int max_n = 1000;

struct MeasureSpec {
  std::vector<WeightZero> zeros;
  double scale = 1.0;
  DensityKind kind = DensityKind::lebesgue;
  std::vector<cplx> alpha;
  std::vector<double> betas;
  std::vector<double> values;
  std::vector<Atom> atoms;
  std::size_t M = 4096;
  double offset = 0.5;
};

struct ExperimentConfig {
  std::string spec_path;
  MeasureSpec measure;
  std::vector<std::string> tasks;
  int n_max = 200;
  std::vector<cplx> probes;
  std::uint64_t seed = 1;
  double eps = 0.3;
  std::vector<Arc> arcs;
  int shift = 1;
  int candidates = 200;
  int workers = 1;
  std::filesystem::path out_dir = "opuc-out";
};

/// Parses a JSON measure/experiment spec. Unknown keys, bad values and
/// out-of-range settings raise configuration errors naming the field path.
ExperimentConfig parse_spec(std::string_view text, const std::string& origin = "<spec>");
ExperimentConfig validate_spec(const std::filesystem::path& path);

/// Re-checks fields after command-line overrides.
void validate_config(const ExperimentConfig& cfg);

/// Effective settings as pretty-printed JSON.
std::string describe(const ExperimentConfig& cfg);

PSMeasure build_measure(const ExperimentConfig& cfg);

struct CheckResult {
  std::string task;
  std::string check;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<std::filesystem::path> files;
  /// 0 all pass, 1 a check failed, 3 a numerical failure.
  int exit_code = 0;
};

RunResult run_experiment(const ExperimentConfig& cfg);

/// Runs the experiment once per value of `param` (beta, n_max or M), each
/// into out_dir/<param>=<value>, and writes out_dir/sweep.tsv.
RunResult run_sweep(const ExperimentConfig& cfg, const std::string& param, const std::vector<double>& values);

int exit_code_for(ErrorKind kind);

}  // namespace opuc

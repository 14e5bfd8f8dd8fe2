#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "opuc/experiment.hpp"

namespace fs = std::filesystem;

namespace {

opuc::ErrorKind parse_kind(const std::string& text) {
  try {
    opuc::parse_spec(text, "test");
  } catch (const opuc::Error& e) {
    return e.kind();
  }
  return opuc::ErrorKind::numerical;
}

std::string message(const std::string& text) {
  try {
    opuc::parse_spec(text, "test");
  } catch (const opuc::Error& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("opuc-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal spec takes the defaults") {
  const auto cfg = opuc::parse_spec(R"({"density": {"kind": "lebesgue"}})");
  CHECK(cfg.measure.M == 4096);
  CHECK(cfg.measure.offset == 0.5);
  CHECK(cfg.tasks == std::vector<std::string>{"sumrule"});
  CHECK(cfg.n_max == 200);
}

TEST_CASE("spec validation errors name the field") {
  CHECK(parse_kind(R"({"atoms": [{"angle": 0, "mass": 0.6}, {"angle": 1, "mass": 0.5}]})") == opuc::ErrorKind::configuration);
  CHECK(message(R"({"experiment": {"tasks": ["sumrule", "foo"]}})").find("experiment.tasks[1]") != std::string::npos);
  CHECK(message(R"({"density": {"kind": "lebesgue", "colour": 1}})").find("density.colour") != std::string::npos);
  CHECK(message(R"({"weight": {"zeros": [{"zeta": [1.0, 0.5]}]}})").find("weight.zeros[0].zeta") != std::string::npos);
  CHECK(message(R"({"experiment": {"n_max": 1001}})").find("experiment.n_max") != std::string::npos);
  CHECK(message(R"({"grid": {"M": 1000}})").find("grid.M") != std::string::npos);
  CHECK(parse_kind("{not json") == opuc::ErrorKind::configuration);
}

TEST_CASE("shipped specs validate") {
  for (const char* name : {"lebesgue", "bs_half", "bs_half_i", "ps_family", "ps_family_atom", "ps_refused"}) {
    const auto cfg = opuc::validate_spec(fs::path(OPUC_SPEC_DIR) / (std::string(name) + ".json"));
    CHECK(!opuc::describe(cfg).empty());
  }
}

TEST_CASE("beta 3.5 is a class violation at run time") {
  auto cfg = opuc::validate_spec(fs::path(OPUC_SPEC_DIR) / "ps_refused.json");
  cfg.out_dir = scratch("refused");
  try {
    opuc::run_experiment(cfg);
    FAIL("refused family ran");
  } catch (const opuc::Error& e) {
    CHECK(e.kind() == opuc::ErrorKind::class_violation);
    CHECK(opuc::exit_code_for(e.kind()) == 3);
  }
}

TEST_CASE("Bernstein-Szego sum rule report") {
  auto cfg = opuc::validate_spec(fs::path(OPUC_SPEC_DIR) / "bs_half.json");
  cfg.tasks = {"sumrule"};
  cfg.n_max = 20;
  cfg.out_dir = scratch("bs");
  const auto r = opuc::run_experiment(cfg);
  CHECK(r.exit_code == 0);
  const auto text = slurp(cfg.out_dir / "sumrule.tsv");
  CHECK(text.rfind("# opuc sumrule seed=1", 0) == 0);
  CHECK(text.find("Z_direct\t") != std::string::npos);
  CHECK(text.find("Z_trace\t") != std::string::npos);
  CHECK(fs::exists(cfg.out_dir / "summary.tsv"));
  CHECK(fs::exists(cfg.out_dir / "summary.json"));
}

TEST_CASE("Lebesgue with every task passes") {
  auto cfg = opuc::validate_spec(fs::path(OPUC_SPEC_DIR) / "lebesgue.json");
  cfg.n_max = 30;
  cfg.candidates = 20;
  cfg.measure.M = 1024;
  cfg.out_dir = scratch("leb");
  const auto r = opuc::run_experiment(cfg);
  for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, c.task << ": " << c.check << " " << c.detail);
  CHECK(r.exit_code == 0);
}

TEST_CASE("worker count does not change the reports") {
  auto cfg = opuc::validate_spec(fs::path(OPUC_SPEC_DIR) / "ps_family_atom.json");
  cfg.n_max = 24;
  cfg.measure.M = 1024;
  cfg.tasks = {"sumrule", "pointwise", "singular", "variational"};
  cfg.candidates = 10;
  cfg.out_dir = scratch("w1");
  const auto a = opuc::run_experiment(cfg);
  cfg.workers = 4;
  cfg.out_dir = scratch("w4");
  const auto b = opuc::run_experiment(cfg);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(slurp(a.files[i]) == slurp(b.files[i]));
}

TEST_CASE("sweep over n_max") {
  auto cfg = opuc::validate_spec(fs::path(OPUC_SPEC_DIR) / "bs_half.json");
  cfg.tasks = {"pointwise"};
  cfg.measure.M = 1024;
  cfg.out_dir = scratch("sweep");
  const auto r = opuc::run_sweep(cfg, "n_max", {5, 12});
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(cfg.out_dir / "sweep.tsv"));
  CHECK(fs::exists(cfg.out_dir / "n_max=12" / "pointwise.tsv"));
  CHECK_THROWS_AS(opuc::run_sweep(cfg, "colour", {1}), opuc::Error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oudrift/estimate.hpp"
#include "oudrift/io.hpp"
#include "oudrift/model.hpp"
#include "oudrift/simulate.hpp"

using namespace oudrift;
namespace fs = std::filesystem;

#ifndef OUDRIFT_CLI_PATH
#error "OUDRIFT_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string command = std::string(OUDRIFT_CLI_PATH) + " " + args +
                              " > " + out.string() + " 2> " + err.string();
  const int status = std::system(command.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("oudrift_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream(p) << content;
}

}  // namespace

TEST_CASE("check: exit codes follow the stability certificate") {
  const fs::path dir = fresh_dir("check");
  write_file(dir / "ok.json", R"({"d":1,"s0":1,"entries":[0.5]})");
  write_file(dir / "neg.json", R"({"d":1,"s0":1,"entries":[-1.0]})");
  write_file(dir / "tri.json", R"({"d":2,"s0":3,"entries":[1,-2,0,-0.5]})");

  auto ok = run_cli("check " + (dir / "ok.json").string(), dir);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("r0: 0.5") != std::string::npos);
  CHECK(ok.out.find("assumption_h: holds") != std::string::npos);

  auto neg = run_cli("check " + (dir / "neg.json").string(), dir);
  CHECK(neg.exit_code == 1);

  auto tri = run_cli("check " + (dir / "tri.json").string(), dir);
  CHECK(tri.exit_code == 1);
  CHECK(tri.out.find("r0: -0.5") != std::string::npos);
}

TEST_CASE("estimate: scalar fixtures through files") {
  const fs::path dir = fresh_dir("estimate");
  write_file(dir / "stats.json",
             R"({"d":1,"t_horizon":1.0,"c_hat":[1.0],"s_hat":[-1.0]})");

  auto dz = run_cli("estimate --stats " + (dir / "stats.json").string() +
                        " --method dantzig --lambda 0.4 -o " +
                        (dir / "dz").string(),
                    dir);
  REQUIRE(dz.exit_code == 0);
  CHECK(slurp(dir / "dz" / "a_hat.csv") == "0.6\n");

  auto la = run_cli("estimate --stats " + (dir / "stats.json").string() +
                        " --method lasso --lambda 0.4 -o " +
                        (dir / "la").string(),
                    dir);
  REQUIRE(la.exit_code == 0);
  const Matrix a = read_matrix_csv(dir / "la" / "a_hat.csv");
  CHECK(a(0, 0) == doctest::Approx(0.6).epsilon(1e-6));

  auto ml = run_cli("estimate --stats " + (dir / "stats.json").string() +
                        " --method mle -o " + (dir / "ml").string(),
                    dir);
  REQUIRE(ml.exit_code == 0);
  CHECK(slurp(dir / "ml" / "a_hat.csv") == "1\n");

  const auto j = read_json_file(dir / "dz" / "estimate.json");
  CHECK(j["method"] == "dantzig");
  CHECK(j["lambda_mode"] == "fixed");
  CHECK(j["status"] == "converged");
}

TEST_CASE("estimate: plugin lambda mode is labeled in the output") {
  const fs::path dir = fresh_dir("plugin");
  write_file(dir / "stats.json",
             R"({"d":1,"t_horizon":300.0,"c_hat":[1.0],"s_hat":[-1.0]})");
  auto r = run_cli("estimate --stats " + (dir / "stats.json").string() +
                       " --method lasso --lambda-mode plugin --eps0 0.1 -o " +
                       (dir / "out").string(),
                   dir);
  REQUIRE(r.exit_code == 0);
  const auto j = read_json_file(dir / "out" / "estimate.json");
  CHECK(j["lambda_mode"] == "plugin");
  // c_hat = 1 makes both surrogates 1, so lambda is the unit-constant rule
  CHECK(j["lambda"].get<double>() ==
        doctest::Approx(2.0 * std::sqrt(3.0 * std::log(20.0) / 300.0))
            .epsilon(1e-12));
}

TEST_CASE("bounds: unit-constant table prints the audit rows") {
  const fs::path dir = fresh_dir("bounds");
  auto r = run_cli("bounds --d 10 --s 2 --c0 1 --eps0 0.1 --unit-constants", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("re_prefactor") != std::string::npos);
  CHECK(r.out.find("211248") != std::string::npos);
  CHECK(r.out.find("7256772.37") != std::string::npos);  // ~7.257e6
  CHECK(r.out.find("martingale_time_min") != std::string::npos);
}

TEST_CASE("usage errors exit with 2, domain and parse errors with 1") {
  const fs::path dir = fresh_dir("codes");
  CHECK(run_cli("--definitely-not-a-flag", dir).exit_code == 2);
  CHECK(run_cli("estimate --stats /nonexistent.json --method mle", dir).exit_code == 2);
  CHECK(run_cli("bounds --d 10 --s 2", dir).exit_code == 2);  // neither constants source

  write_file(dir / "bad.json", "{ not json");
  CHECK(run_cli("check " + (dir / "bad.json").string(), dir).exit_code == 1);

  write_file(dir / "stats.json",
             R"({"d":1,"t_horizon":1.0,"c_hat":[0.0],"s_hat":[-1.0]})");
  auto singular = run_cli("estimate --stats " + (dir / "stats.json").string() +
                              " --method mle -o " + (dir / "x").string(),
                          dir);
  CHECK(singular.exit_code == 1);
  CHECK(singular.err.find("condition") != std::string::npos);

  auto help = run_cli("--help", dir);
  CHECK(help.exit_code == 0);
}

TEST_CASE("simulate then estimate reproduces the in-process pipeline bitwise") {
  const fs::path dir = fresh_dir("pipeline");
  const ModelSpec model = generate_sparse_stable(3, 6, 0.5, 4);
  write_model_json(model, dir / "model.json");

  auto sim = run_cli("simulate --model " + (dir / "model.json").string() +
                         " --t 10 --n 5000 --scheme exact --seed 11 -o " +
                         dir.string(),
                     dir);
  REQUIRE(sim.exit_code == 0);

  auto est = run_cli("estimate --stats " + (dir / "stats.json").string() +
                         " --method mle -o " + (dir / "fit").string(),
                     dir);
  REQUIRE(est.exit_code == 0);

  SimConfig cfg;
  cfg.t_horizon = 10.0;
  cfg.n_steps = 5000;
  cfg.scheme = Scheme::Exact;
  cfg.seed = 11;
  const SufficientStats stats = sufficient_stats(simulate_path(model, cfg));
  const EstimateResult expected = mle(stats);
  const Matrix from_files = read_matrix_csv(dir / "fit" / "a_hat.csv");
  CHECK(from_files == expected.a_hat);
}

TEST_CASE("fig2: determinism across runs and config/flag precedence") {
  const fs::path dir = fresh_dir("fig2");
  write_file(dir / "cfg.json",
             R"({"d_values":[2],"rho":0.75,"t_horizon":5.0,"n_steps":400,"n_reps":2})");

  auto r1 = run_cli("fig2 --config " + (dir / "cfg.json").string() +
                        " --seed 42 -o " + (dir / "run1").string(),
                    dir);
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("fig2 --config " + (dir / "cfg.json").string() +
                        " --seed 42 -o " + (dir / "run2").string(),
                    dir);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(dir / "run1" / "fig2_summary.csv") ==
        slurp(dir / "run2" / "fig2_summary.csv"));
  CHECK(slurp(dir / "run1" / "fig2_raw.csv") ==
        slurp(dir / "run2" / "fig2_raw.csv"));

  auto r3 = run_cli("fig2 --config " + (dir / "cfg.json").string() +
                        " --seed 42 --t 7 -o " + (dir / "run3").string(),
                    dir);
  REQUIRE(r3.exit_code == 0);
  const auto meta = read_json_file(dir / "run3" / "run_meta.json");
  CHECK(meta["t_horizon"].get<double>() == 7.0);  // flag beats config

  // rejected config: rho 0.3 at d=2 gives s < d
  write_file(dir / "bad.json", R"({"d_values":[2],"rho":0.3})");
  auto bad = run_cli("fig2 --config " + (dir / "bad.json").string() + " -o " +
                         (dir / "bad_out").string(),
                     dir);
  CHECK(bad.exit_code == 1);
}

TEST_CASE("fig1: writes the four panels") {
  const fs::path dir = fresh_dir("fig1");
  auto r = run_cli(
      "fig1 --d 2 --rho 0.75 --t 5 --n 400 --reps 1 --seed 9 -o " +
          (dir / "out").string(),
      dir);
  REQUIRE(r.exit_code == 0);
  for (const char* name : {"a0", "mle", "lasso", "dantzig"}) {
    CHECK(fs::exists(dir / "out" / ("fig1_" + std::string(name) + ".csv")));
    CHECK(fs::exists(dir / "out" / ("fig1_" + std::string(name) + ".svg")));
  }
  CHECK(fs::exists(dir / "out" / "run_meta.json"));
}

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oudrift/bounds.hpp"
#include "oudrift/estimate.hpp"
#include "oudrift/experiments.hpp"
#include "oudrift/io.hpp"
#include "oudrift/model.hpp"
#include "oudrift/simulate.hpp"

namespace fs = std::filesystem;
using namespace oudrift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int g_verbosity = 0;

void log_line(const std::string& msg) {
  if (g_verbosity > 0) std::cerr << "[oudrift] " << msg << '\n';
}

fs::path default_output_dir() {
  if (const char* env = std::getenv("OUDRIFT_OUTPUT_DIR")) return fs::path(env);
  return fs::path(".");
}

fs::path ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw FileError("output directory is not writable: " + dir.string());
  return dir;
}

void print_certificate(const HCertificate& cert) {
  std::cout << "eigenvalues:";
  for (Eigen::Index i = 0; i < cert.eigenvalues.size(); ++i) {
    const auto z = cert.eigenvalues[i];
    std::cout << ' ' << format_double(z.real());
    if (z.imag() != 0.0) std::cout << (z.imag() > 0 ? "+" : "") << format_double(z.imag()) << 'i';
  }
  std::cout << '\n';
  std::cout << "r0: " << format_double(cert.r0) << '\n';
  std::cout << "p0: " << format_double(cert.p0) << '\n';
  std::cout << "condition_estimate: " << format_double(cert.condition_estimate) << '\n';
  std::cout << "diagonalizable: " << (cert.diagonalizable ? "yes" : "no") << '\n';
  std::cout << "assumption_h: " << (cert.holds() ? "holds" : "fails") << '\n';
}

int run_check(const std::string& model_path) {
  const ModelSpec model = read_model_json(model_path);
  const HCertificate cert = check_assumption_h(model.a0);
  print_certificate(cert);
  std::cout << "d: " << model.d << '\n';
  std::cout << "s0: " << model.s0 << " (s0 >= d: " << (model.s0 >= model.d ? "yes" : "no")
            << ")\n";
  if (!cert.holds()) return kExitDomain;
  const ErgodicConstants c = ergodic_constants(model.a0);
  std::cout << "k_big: " << format_double(c.k_big) << '\n';
  std::cout << "k_small: " << format_double(c.k_small) << '\n';
  std::cout << "m_small: " << format_double(c.m_small) << '\n';
  std::cout << "m_big: " << format_double(c.m_big) << '\n';
  return kExitOk;
}

void print_bounds_table(const BoundsReport& r) {
  const auto row = [](const std::string& name, const std::string& formula,
                      double value) {
    std::printf("%-22s %-58s %s\n", name.c_str(), formula.c_str(),
                format_double(value).c_str());
  };
  std::printf("%-22s %-58s %s\n", "quantity", "formula", "value");
  row("r0", "min Re(theta_i)", r.constants.r0);
  row("p0", "|P|_op |P^-1|_op, unit eigenvector columns", r.constants.p0);
  row("k_big", "lambda_max(C_inf)", r.constants.k_big);
  row("k_small", "lambda_min(C_inf)", r.constants.k_small);
  row("m_small", "max_i C_inf(i,i)", r.constants.m_small);
  row("m_big", "max_ij |C_inf(i,j)|", r.constants.m_big);
  row("lambda_min", "2 sqrt((2 m_small + k_small) ln(2 d^2/eps0) / T)", r.lambda_min);
  row("re_prefactor", "144 p0 k_big (c0+2)^2 (k_small + 18 (c0+2)^2 k_big) / (r0 k_small^2)",
      r.re_threshold.prefactor);
  row("re_time_min", "re_prefactor ((4s+1) ln d - 2s (ln(2s/21) - 1) + ln(2/eps0))",
      r.re_threshold.t_min);
  row("martingale_time_min",
      "(48 p0 k_big / r0) (k_small + 6 k_big)/k_small^2 ((2s+1) ln d - s(ln s - 1) + ln(4/eps0))",
      r.martingale_t_min);
  row("lasso_oracle_const", "9 (2+gamma)^2 / (2 k_small gamma (1+gamma))",
      r.oracle.lasso_oracle_const);
  row("dantzig_oracle_const",
      "(18/k_small) ((gamma+2)^2/(4 gamma) + 48 m_big/k_small + 72)",
      r.oracle.dantzig_oracle_const);
  row("err_l2_pred", "18 s0 lambda^2 / k_small", r.oracle.l2_pred);
  row("err_frobenius_sq", "36 s0 lambda^2 / k_small^2", r.oracle.frob);
  row("err_l1", "24 s0 lambda / k_small", r.oracle.l1);
  row("sparsity_bound", "(48 m_big/k_small + 72) s0", r.oracle.sparsity);
  for (const auto& [x, value] : r.tail_exponent_curve)
    row("tail_exponent(" + format_double(x) + ")",
        "r0 x^2 / (8 p0 k_big (x + k_big))", value);
  if (r.re_threshold.bracket_negative)
    std::cerr << "[oudrift] warning: re_time_min log bracket is negative\n";
}

void apply_overrides(CLI::App* cmd, ExperimentConfig& cfg, double t, int n,
                     int reps, double rho, const std::string& lambda_mode,
                     double eps0, double lambda, std::uint64_t seed,
                     const std::string& scheme, double margin, double tau,
                     int threads, const std::vector<int>& d_values) {
  if (cmd->count("--t")) cfg.t_horizon = t;
  if (cmd->count("--n")) cfg.n_steps = n;
  if (cmd->count("--reps")) cfg.n_reps = reps;
  if (cmd->count("--rho")) cfg.rho = rho;
  if (cmd->count("--lambda-mode")) cfg.lambda_mode = lambda_mode_from_name(lambda_mode);
  if (cmd->count("--eps0")) cfg.eps0 = eps0;
  if (cmd->count("--lambda")) {
    cfg.fixed_lambda = lambda;
    if (!cmd->count("--lambda-mode")) cfg.lambda_mode = LambdaMode::Fixed;
  }
  if (cmd->count("--seed")) cfg.seed = seed;
  if (cmd->count("--scheme")) cfg.scheme = scheme_from_name(scheme);
  if (cmd->count("--margin")) cfg.margin = margin;
  if (cmd->count("--tau")) cfg.tau_supp = tau;
  if (cmd->count("--threads")) cfg.threads = threads;
  const CLI::Option* dv = cmd->get_option_no_throw("--d-values");
  if (dv != nullptr && dv->count()) cfg.d_values = d_values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse drift estimation for Ornstein-Uhlenbeck models"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_flag("-v,--verbose", g_verbosity, "log progress to stderr");

  std::string out_dir_flag;
  app.add_option("-o,--output-dir", out_dir_flag,
                 "output directory (default: $OUDRIFT_OUTPUT_DIR or '.')");

  // ---- check ----------------------------------------------------------
  auto* cmd_check = app.add_subcommand("check", "verify the stability assumption of a model file");
  std::string check_model;
  cmd_check->add_option("model", check_model, "model JSON file")->required();

  // ---- simulate -------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "simulate a trajectory and write its sufficient statistics");
  std::string sim_model;
  double sim_t = 300.0;
  int sim_n = 500000;
  std::string sim_scheme = "exact";
  std::uint64_t sim_seed = 0;
  bool sim_retain = false;
  bool sim_emit_path = false;
  cmd_sim->add_option("--model", sim_model, "model JSON file")->required();
  cmd_sim->add_option("--t", sim_t, "time horizon T");
  cmd_sim->add_option("--n", sim_n, "number of grid steps");
  cmd_sim->add_option("--scheme", sim_scheme, "exact|euler");
  cmd_sim->add_option("--seed", sim_seed, "RNG seed");
  cmd_sim->add_flag("--retain-brownian", sim_retain, "store Brownian increments (euler)");
  cmd_sim->add_flag("--emit-path", sim_emit_path, "also write path.csv (large)");

  // ---- estimate -------------------------------------------------------
  auto* cmd_est = app.add_subcommand("estimate", "run an estimator on a statistics file");
  std::string est_stats, est_method = "mle", est_lambda_mode;
  double est_lambda = 0.0, est_eps0 = 0.1, est_tol = 1e-8, est_lp_tol = 1e-9;
  int est_max_iter = 20000;
  cmd_est->add_option("--stats", est_stats, "sufficient statistics JSON file")->required();
  cmd_est->add_option("--method", est_method, "mle|lasso|dantzig")->required();
  cmd_est->add_option("--lambda", est_lambda, "tuning parameter (fixed mode)");
  cmd_est->add_option("--lambda-mode", est_lambda_mode, "fixed|plugin");
  cmd_est->add_option("--eps0", est_eps0, "confidence level for plugin lambda");
  cmd_est->add_option("--tol", est_tol, "lasso relative objective tolerance");
  cmd_est->add_option("--max-iter", est_max_iter, "lasso iteration cap");
  cmd_est->add_option("--lp-tol", est_lp_tol, "dantzig pivot tolerance");

  // ---- bounds ---------------------------------------------------------
  auto* cmd_bounds = app.add_subcommand("bounds", "evaluate every theoretical constant and bound");
  int b_d = 10, b_s = 1, b_s0 = 0;
  double b_c0 = 1.0, b_eps0 = 0.1, b_gamma = 1.0, b_t = 300.0;
  bool b_unit = false;
  std::string b_model, b_json_out;
  cmd_bounds->add_option("--d", b_d, "dimension")->required();
  cmd_bounds->add_option("--s", b_s, "cone sparsity s")->required();
  cmd_bounds->add_option("--c0", b_c0, "cone opening c0");
  cmd_bounds->add_option("--eps0", b_eps0, "confidence level");
  cmd_bounds->add_option("--s0", b_s0, "model sparsity (default: s)");
  cmd_bounds->add_option("--gamma", b_gamma, "oracle inequality gamma");
  cmd_bounds->add_option("--t", b_t, "time horizon for the lambda rule");
  cmd_bounds->add_flag("--unit-constants", b_unit, "use all-ones ergodic constants");
  cmd_bounds->add_option("--model", b_model, "model JSON file to take constants from");
  cmd_bounds->add_option("--json", b_json_out, "also write the report as JSON");

  // ---- fig1 / fig2 ----------------------------------------------------
  auto* cmd_fig1 = app.add_subcommand("fig1", "support-recovery heatmaps at one dimension");
  auto* cmd_fig2 = app.add_subcommand("fig2", "relative-error-vs-dimension study");
  int f1_d = 15;
  cmd_fig1->add_option("--d", f1_d, "dimension");
  std::string cfg_path1, cfg_path2;
  cmd_fig1->add_option("--config", cfg_path1, "experiment config JSON");
  cmd_fig2->add_option("--config", cfg_path2, "experiment config JSON");

  double ov_t = 300.0, ov_rho = 0.3, ov_eps0 = 0.1, ov_lambda = 0.1,
         ov_margin = 2.0, ov_tau = 1e-6;
  int ov_n = 500000, ov_reps = 10, ov_threads = 0;
  std::uint64_t ov_seed = 0;
  std::string ov_lambda_mode = "plugin", ov_scheme = "exact";
  std::vector<int> ov_d_values;
  for (CLI::App* cmd : {cmd_fig1, cmd_fig2}) {
    cmd->add_option("--t", ov_t, "time horizon T");
    cmd->add_option("--n", ov_n, "grid steps");
    cmd->add_option("--reps", ov_reps, "replications");
    cmd->add_option("--rho", ov_rho, "sparsity fraction (s = round(rho d^2))");
    cmd->add_option("--lambda-mode", ov_lambda_mode, "theoretical|plugin|fixed");
    cmd->add_option("--eps0", ov_eps0, "confidence level");
    cmd->add_option("--lambda", ov_lambda, "fixed lambda value");
    cmd->add_option("--seed", ov_seed, "master seed");
    cmd->add_option("--scheme", ov_scheme, "exact|euler");
    cmd->add_option("--margin", ov_margin, "Gershgorin margin of generated models");
    cmd->add_option("--tau", ov_tau, "support threshold");
    cmd->add_option("--threads", ov_threads, "worker threads (0 = auto)");
  }
  cmd_fig2->add_option("--d-values", ov_d_values, "dimensions to sweep")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n'
              << "run with --help for usage\n";
    return kExitUsage;
  }

  const fs::path out_dir =
      out_dir_flag.empty() ? default_output_dir() : fs::path(out_dir_flag);

  try {
    if (cmd_check->parsed()) return run_check(check_model);

    if (cmd_sim->parsed()) {
      const ModelSpec model = read_model_json(sim_model);
      SimConfig cfg;
      cfg.t_horizon = sim_t;
      cfg.n_steps = sim_n;
      cfg.scheme = scheme_from_name(sim_scheme);
      cfg.seed = sim_seed;
      cfg.retain_brownian = sim_retain;
      log_line("simulating " + std::to_string(sim_n) + " steps");
      const Path path = simulate_path(model, cfg);
      const SufficientStats stats = sufficient_stats(path);
      const fs::path dir = ensure_output_dir(out_dir);
      write_stats_json(stats, dir / "stats.json");
      if (sim_emit_path) write_path_csv(path, dir / "path.csv");
      log_line("wrote " + (dir / "stats.json").string());
      return kExitOk;
    }

    if (cmd_est->parsed()) {
      const SufficientStats stats = read_stats_json(est_stats);
      const int d = stats.dim();
      std::string mode = est_lambda_mode;
      if (mode.empty()) mode = cmd_est->count("--lambda") ? "fixed" : "";
      double lambda = est_lambda;
      if (mode == "plugin")
        lambda = lambda_rule_plugin(d, stats.t_horizon, est_eps0, stats);
      else if (mode != "fixed" && mode != "" && est_method != "mle")
        throw CLI::ValidationError("--lambda-mode must be fixed|plugin");
      if (est_method != "mle" && mode.empty())
        throw CLI::ValidationError(
            "estimate: lasso/dantzig need --lambda or --lambda-mode plugin");

      EstimateResult result;
      if (est_method == "mle") {
        result = mle(stats);
      } else if (est_method == "lasso") {
        LassoConfig cfg;
        cfg.lambda = lambda;
        cfg.tol = est_tol;
        cfg.max_iter = est_max_iter;
        result = lasso(stats, cfg);
      } else if (est_method == "dantzig") {
        DantzigConfig cfg;
        cfg.lambda = lambda;
        cfg.lp_tol = est_lp_tol;
        result = dantzig(stats, cfg);
      } else {
        throw CLI::ValidationError("unknown method '" + est_method + "'");
      }
      const fs::path dir = ensure_output_dir(out_dir);
      write_matrix_csv(result.a_hat, dir / "a_hat.csv");
      nlohmann::json j = estimate_to_json(result);
      j["lambda_mode"] = mode.empty() ? "none" : mode;
      write_json_file(j, dir / "estimate.json");
      log_line("wrote " + (dir / "a_hat.csv").string());
      return kExitOk;
    }

    if (cmd_bounds->parsed()) {
      if (b_unit == !b_model.empty())
        throw CLI::ValidationError(
            "bounds: pass exactly one of --unit-constants or --model");
      ErgodicConstants constants;
      if (b_unit) {
        constants.c_inf = Matrix::Identity(1, 1);
        constants.k_big = constants.k_small = 1.0;
        constants.m_small = constants.m_big = 1.0;
        constants.r0 = constants.p0 = 1.0;
      } else {
        constants = ergodic_constants(read_model_json(b_model).a0);
      }
      const int s0 = b_s0 > 0 ? b_s0 : b_s;
      const BoundsReport report =
          bounds_report(b_d, b_s, b_c0, b_eps0, s0, b_gamma, b_t, constants);
      print_bounds_table(report);
      if (!b_json_out.empty())
        write_json_file(bounds_report_to_json(report),
                        ensure_output_dir(out_dir) / b_json_out);
      return kExitOk;
    }

    if (cmd_fig1->parsed() || cmd_fig2->parsed()) {
      CLI::App* cmd = cmd_fig1->parsed() ? cmd_fig1 : cmd_fig2;
      const std::string& cfg_path = cmd_fig1->parsed() ? cfg_path1 : cfg_path2;
      ExperimentConfig cfg;
      if (!cfg_path.empty()) cfg = read_experiment_config(cfg_path);
      apply_overrides(cmd, cfg, ov_t, ov_n, ov_reps, ov_rho, ov_lambda_mode,
                      ov_eps0, ov_lambda, ov_seed, ov_scheme, ov_margin,
                      ov_tau, ov_threads, ov_d_values);
      const fs::path dir = ensure_output_dir(out_dir);
      if (cmd_fig1->parsed()) {
        if (cmd->count("--d")) {
          // flag wins over config for the single-dimension study
        } else if (cfg.d_values.size() == 1) {
          f1_d = cfg.d_values.front();
        }
        log_line("fig1 at d=" + std::to_string(f1_d));
        const HeatmapBundle bundle = run_fig1(f1_d, cfg);
        write_fig1_outputs(bundle, cfg, dir);
      } else {
        log_line("fig2 over " + std::to_string(cfg.d_values.size()) +
                 " dimensions, " + std::to_string(cfg.n_reps) + " reps");
        const ErrorReport report = run_fig2(cfg);
        write_fig2_outputs(report, cfg, dir);
        for (const auto& failure : report.failures)
          std::cerr << "[oudrift] replication failure: " << failure << '\n';
      }
      log_line("outputs in " + dir.string());
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FileError& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

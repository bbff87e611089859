#include "oudrift/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "oudrift/io.hpp"
#include "oudrift/norms.hpp"
#include "oudrift/rng.hpp"

namespace oudrift {

namespace {

using nlohmann::json;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
  int n = 0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  out.n = static_cast<int>(values.size());
  if (out.n == 0) return out;
  KahanSum total;
  for (double v : values) total.add(v);
  out.mean = total.sum / out.n;
  if (out.n >= 2) {
    KahanSum sq;
    for (double v : values) sq.add((v - out.mean) * (v - out.mean));
    out.stddev = std::sqrt(sq.sum / (out.n - 1));
  }
  return out;
}

double lambda_for(const ExperimentConfig& cfg, const ModelSpec& model,
                  const SufficientStats& stats) {
  switch (cfg.lambda_mode) {
    case LambdaMode::Theoretical:
      return lambda_rule(model.d, cfg.t_horizon, cfg.eps0,
                         ergodic_constants(model.a0));
    case LambdaMode::PlugIn:
      return lambda_rule_plugin(model.d, cfg.t_horizon, cfg.eps0, stats);
    default:
      return cfg.fixed_lambda;
  }
}

void fill_method(MethodOutcome& out, const EstimateResult& result,
                 const ModelSpec& model, double tau) {
  out.ok = true;
  out.rel_l1 = norm_l1(result.a_hat - model.a0) / norm_l1(model.a0);
  out.rel_fro = norm_fro(result.a_hat - model.a0) / norm_fro(model.a0);
  out.support = support_metrics(result.a_hat, model.a0, tau);
  out.status = result.status;
}

RepOutcome run_cell(const ExperimentConfig& cfg, int d, int rep) {
  RepOutcome cell;
  cell.d = d;
  cell.rep = rep;
  const int s = sparsity_for(cfg.rho, d);
  const std::uint64_t model_seed =
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(d),
                             static_cast<std::uint64_t>(rep), 0});
  const std::uint64_t path_seed =
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(d),
                             static_cast<std::uint64_t>(rep), 1});
  const ModelSpec model = generate_sparse_stable(d, s, cfg.margin, model_seed);
  SimConfig sim;
  sim.t_horizon = cfg.t_horizon;
  sim.n_steps = cfg.n_steps;
  sim.scheme = cfg.scheme;
  sim.seed = path_seed;
  const SufficientStats stats = sufficient_stats(simulate_path(model, sim));
  cell.lambda = lambda_for(cfg, model, stats);

  try {
    fill_method(cell.methods[0], mle(stats), model, cfg.tau_supp);
  } catch (const std::exception& e) {
    cell.methods[0].error = e.what();
  }
  try {
    LassoConfig lasso_cfg;
    lasso_cfg.lambda = cell.lambda;
    fill_method(cell.methods[1], lasso(stats, lasso_cfg), model, cfg.tau_supp);
  } catch (const std::exception& e) {
    cell.methods[1].error = e.what();
  }
  try {
    DantzigConfig dz_cfg;
    dz_cfg.lambda = cell.lambda;
    fill_method(cell.methods[2], dantzig(stats, dz_cfg), model, cfg.tau_supp);
  } catch (const std::exception& e) {
    cell.methods[2].error = e.what();
  }
  return cell;
}

constexpr Method kMethods[3] = {Method::Mle, Method::Lasso, Method::Dantzig};

}  // namespace

int sparsity_for(double rho, int d) {
  return static_cast<int>(std::lround(rho * d * d));
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.d_values.empty())
    throw std::invalid_argument("experiment config: d_values must be nonempty");
  if (!(cfg.rho > 0))
    throw std::invalid_argument("experiment config: rho must be > 0");
  for (int d : cfg.d_values) {
    if (d < 1) throw std::invalid_argument("experiment config: d must be >= 1");
    const int s = sparsity_for(cfg.rho, d);
    if (s < d)
      throw std::invalid_argument(
          "experiment config: s = round(rho d^2) = " + std::to_string(s) +
          " < d = " + std::to_string(d) + "; increase rho or d");
    if (s > d * d)
      throw std::invalid_argument("experiment config: rho > 1 is not meaningful");
  }
  if (cfg.n_reps < 1)
    throw std::invalid_argument("experiment config: n_reps must be >= 1");
  if (!(cfg.t_horizon > 0) || cfg.n_steps < 1)
    throw std::invalid_argument("experiment config: invalid grid");
  if (!(cfg.margin > 0))
    throw std::invalid_argument("experiment config: margin must be > 0");
  if (!(cfg.tau_supp > 0))
    throw std::invalid_argument("experiment config: tau_supp must be > 0");
  if (cfg.lambda_mode != LambdaMode::Fixed && !(cfg.eps0 > 0 && cfg.eps0 < 1))
    throw std::invalid_argument("experiment config: eps0 must lie in (0,1)");
  if (cfg.lambda_mode == LambdaMode::Fixed && !(cfg.fixed_lambda >= 0))
    throw std::invalid_argument("experiment config: lambda must be >= 0");
}

SupportMetrics support_metrics(const Matrix& a_hat, const Matrix& a0,
                               double tau) {
  if (a_hat.rows() != a0.rows() || a_hat.cols() != a0.cols())
    throw std::invalid_argument("support_metrics: shape mismatch");
  if (!(tau > 0)) throw std::invalid_argument("support_metrics: tau must be > 0");
  int tp = 0, fp = 0, fn = 0;
  for (Eigen::Index j = 0; j < a0.cols(); ++j) {
    for (Eigen::Index i = 0; i < a0.rows(); ++i) {
      const bool predicted = std::abs(a_hat(i, j)) > tau;
      const bool actual = a0(i, j) != 0.0;
      if (predicted && actual) ++tp;
      else if (predicted) ++fp;
      else if (actual) ++fn;
    }
  }
  SupportMetrics m;
  m.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
  m.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
  m.f1 = (m.precision + m.recall) == 0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

double report_mean(const ErrorReport& report, int d, Method method,
                   const std::string& norm) {
  for (const auto& row : report.rows)
    if (row.d == d && row.method == method && row.norm == norm) return row.mean;
  throw std::invalid_argument("report_mean: no row for d=" + std::to_string(d) +
                              " method=" + method_name(method) + " norm=" + norm);
}

ErrorReport run_fig2(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto t_start = std::chrono::steady_clock::now();

  const int n_d = static_cast<int>(cfg.d_values.size());
  const int n_tasks = n_d * cfg.n_reps;
  std::vector<RepOutcome> cells(static_cast<std::size_t>(n_tasks));
  std::vector<std::string> task_errors(static_cast<std::size_t>(n_tasks));

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, n_tasks));

  std::atomic<int> next_task{0};
  const auto worker = [&]() {
    for (;;) {
      const int task = next_task.fetch_add(1);
      if (task >= n_tasks) return;
      const int d = cfg.d_values[static_cast<std::size_t>(task / cfg.n_reps)];
      const int rep = task % cfg.n_reps;
      try {
        cells[static_cast<std::size_t>(task)] = run_cell(cfg, d, rep);
      } catch (const std::exception& e) {
        RepOutcome failed;
        failed.d = d;
        failed.rep = rep;
        cells[static_cast<std::size_t>(task)] = failed;
        task_errors[static_cast<std::size_t>(task)] =
            "d=" + std::to_string(d) + " rep=" + std::to_string(rep) + ": " +
            e.what();
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ErrorReport report;
  report.raw = std::move(cells);
  for (const auto& err : task_errors)
    if (!err.empty()) report.failures.push_back(err);
  for (const auto& cell : report.raw)
    for (int m = 0; m < 3; ++m)
      if (!cell.methods[m].ok && !cell.methods[m].error.empty())
        report.failures.push_back("d=" + std::to_string(cell.d) +
                                  " rep=" + std::to_string(cell.rep) + " " +
                                  method_name(kMethods[m]) + ": " +
                                  cell.methods[m].error);

  // Fixed aggregation order: d as configured, then method, then metric.
  for (int di = 0; di < n_d; ++di) {
    const int d = cfg.d_values[static_cast<std::size_t>(di)];
    for (int m = 0; m < 3; ++m) {
      std::vector<double> l1, fro, precision, recall, f1;
      for (int rep = 0; rep < cfg.n_reps; ++rep) {
        const auto& cell =
            report.raw[static_cast<std::size_t>(di * cfg.n_reps + rep)];
        const auto& outcome = cell.methods[m];
        if (!outcome.ok) continue;
        l1.push_back(outcome.rel_l1);
        fro.push_back(outcome.rel_fro);
        precision.push_back(outcome.support.precision);
        recall.push_back(outcome.support.recall);
        f1.push_back(outcome.support.f1);
      }
      const auto push = [&](const std::string& norm,
                            const std::vector<double>& values) {
        const MeanStd ms = mean_std(values);
        report.rows.push_back(
            {d, kMethods[m], norm, ms.mean, ms.stddev, ms.n});
      };
      push("l1", l1);
      push("frobenius", fro);
      push("support_precision", precision);
      push("support_recall", recall);
      push("support_f1", f1);
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

namespace {

json run_meta_common(const ExperimentConfig& cfg) {
  json meta{{"seed", cfg.seed},
            {"scheme", scheme_name(cfg.scheme)},
            {"lambda_mode", lambda_mode_name(cfg.lambda_mode)},
            {"rho", cfg.rho},
            {"margin", cfg.margin},
            {"t_horizon", cfg.t_horizon},
            {"n_steps", cfg.n_steps},
            {"tau_supp", cfg.tau_supp},
            {"note",
             "qualitative-trend reproduction: the reference study reports "
             "neither its tuning parameter, nor the law of the sparse "
             "matrices, nor a colour scale"}};
  if (cfg.lambda_mode == LambdaMode::Fixed)
    meta["lambda"] = cfg.fixed_lambda;
  else
    meta["eps0"] = cfg.eps0;
  return meta;
}

}  // namespace

void write_fig2_outputs(const ErrorReport& report, const ExperimentConfig& cfg,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  {
    std::ofstream out(out_dir / "fig2_summary.csv");
    if (!out) throw FileError("cannot open for writing: " +
                               (out_dir / "fig2_summary.csv").string());
    out << "d,method,norm,mean,std\n";
    for (const auto& row : report.rows)
      out << row.d << ',' << method_name(row.method) << ',' << row.norm << ','
          << format_double(row.mean) << ',' << format_double(row.stddev)
          << '\n';
  }
  {
    std::ofstream out(out_dir / "fig2_raw.csv");
    if (!out) throw FileError("cannot open for writing: " +
                               (out_dir / "fig2_raw.csv").string());
    out << "d,rep,method,lambda,rel_l1,rel_frobenius,precision,recall,f1,"
           "status,ok\n";
    for (const auto& cell : report.raw)
      for (int m = 0; m < 3; ++m) {
        const auto& outcome = cell.methods[m];
        out << cell.d << ',' << cell.rep << ',' << method_name(kMethods[m])
            << ',' << format_double(cell.lambda) << ','
            << format_double(outcome.rel_l1) << ','
            << format_double(outcome.rel_fro) << ','
            << format_double(outcome.support.precision) << ','
            << format_double(outcome.support.recall) << ','
            << format_double(outcome.support.f1) << ','
            << status_name(outcome.status) << ',' << (outcome.ok ? 1 : 0)
            << '\n';
      }
  }

  json meta = run_meta_common(cfg);
  meta["command"] = "fig2";
  meta["d_values"] = cfg.d_values;
  meta["n_reps"] = cfg.n_reps;
  meta["wall_time_seconds"] = report.wall_seconds;
  json lambdas = json::array();
  for (const auto& cell : report.raw)
    lambdas.push_back(
        json{{"d", cell.d}, {"rep", cell.rep}, {"lambda", cell.lambda}});
  meta["lambdas"] = lambdas;
  meta["failures"] = report.failures;
  write_json_file(meta, out_dir / "run_meta.json");
}

HeatmapBundle run_fig1(int d, const ExperimentConfig& cfg) {
  ExperimentConfig one = cfg;
  one.d_values = {d};
  one.n_reps = 1;
  validate_config(one);

  const int s = sparsity_for(cfg.rho, d);
  const std::uint64_t model_seed =
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(d), 0, 0});
  const std::uint64_t path_seed =
      derive_seed(cfg.seed, {static_cast<std::uint64_t>(d), 0, 1});

  HeatmapBundle bundle;
  bundle.model = generate_sparse_stable(d, s, cfg.margin, model_seed);
  SimConfig sim;
  sim.t_horizon = cfg.t_horizon;
  sim.n_steps = cfg.n_steps;
  sim.scheme = cfg.scheme;
  sim.seed = path_seed;
  const SufficientStats stats =
      sufficient_stats(simulate_path(bundle.model, sim));
  bundle.lambda = lambda_for(cfg, bundle.model, stats);

  bundle.mle_result = mle(stats);
  LassoConfig lasso_cfg;
  lasso_cfg.lambda = bundle.lambda;
  bundle.lasso_result = lasso(stats, lasso_cfg);
  DantzigConfig dz_cfg;
  dz_cfg.lambda = bundle.lambda;
  bundle.dantzig_result = dantzig(stats, dz_cfg);

  bundle.mle_support =
      support_metrics(bundle.mle_result.a_hat, bundle.model.a0, cfg.tau_supp);
  bundle.lasso_support =
      support_metrics(bundle.lasso_result.a_hat, bundle.model.a0, cfg.tau_supp);
  bundle.dantzig_support = support_metrics(bundle.dantzig_result.a_hat,
                                           bundle.model.a0, cfg.tau_supp);
  return bundle;
}

std::string heatmap_svg(const Matrix& m, double vmax, const std::string& title) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  const int cell = 24;
  const int margin_px = 8;
  const int title_px = 22;
  const int width = cols * cell + 2 * margin_px;
  const int height = rows * cell + 2 * margin_px + title_px;
  if (!(vmax > 0)) vmax = 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << margin_px << "\" y=\"" << (title_px - 6)
      << "\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double t = m(i, j) / vmax;
      t = std::clamp(t, -1.0, 1.0);
      int r, g, b;
      if (t >= 0) {  // white -> red
        r = 255;
        g = static_cast<int>(std::lround(255 * (1.0 - t)));
        b = g;
      } else {  // white -> blue
        b = 255;
        g = static_cast<int>(std::lround(255 * (1.0 + t)));
        r = g;
      }
      svg << "<rect x=\"" << (margin_px + j * cell) << "\" y=\""
          << (title_px + margin_px + i * cell) << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << r << ',' << g << ','
          << b << ")\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_fig1_outputs(const HeatmapBundle& bundle,
                        const ExperimentConfig& cfg,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  const std::pair<std::string, const Matrix*> panels[4] = {
      {"a0", &bundle.model.a0},
      {"mle", &bundle.mle_result.a_hat},
      {"lasso", &bundle.lasso_result.a_hat},
      {"dantzig", &bundle.dantzig_result.a_hat}};

  double vmax = 0.0;
  for (const auto& [name, matrix] : panels)
    vmax = std::max(vmax, norm_linf(*matrix));

  for (const auto& [name, matrix] : panels) {
    write_matrix_csv(*matrix, out_dir / ("fig1_" + name + ".csv"));
    std::ofstream out(out_dir / ("fig1_" + name + ".svg"));
    if (!out) throw FileError("cannot open for writing: " +
                               (out_dir / ("fig1_" + name + ".svg")).string());
    out << heatmap_svg(*matrix, vmax, name);
  }

  json meta = run_meta_common(cfg);
  meta["command"] = "fig1";
  meta["d"] = bundle.model.d;
  meta["s"] = bundle.model.s0;
  meta["lambda_used"] = bundle.lambda;
  meta["color_scale_vmax"] = vmax;
  meta["support_f1"] = json{{"mle", bundle.mle_support.f1},
                            {"lasso", bundle.lasso_support.f1},
                            {"dantzig", bundle.dantzig_support.f1}};
  write_json_file(meta, out_dir / "run_meta.json");
}

}  // namespace oudrift

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oudrift/estimate.hpp"
#include "oudrift/model.hpp"
#include "oudrift/simulate.hpp"
#include "oudrift/types.hpp"

namespace oudrift {

enum class LambdaMode { Theoretical, PlugIn, Fixed };

struct ExperimentConfig {
  std::vector<int> d_values = {5, 10, 15, 20};
  double rho = 0.3;  // sparsity fraction: s = round(rho d^2)
  double t_horizon = 300.0;
  int n_steps = 500000;
  int n_reps = 10;
  LambdaMode lambda_mode = LambdaMode::PlugIn;
  double eps0 = 0.1;          // Theoretical / PlugIn
  double fixed_lambda = 0.1;  // Fixed
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::Exact;
  double margin = 2.0;
  double tau_supp = 1e-6;
  int threads = 0;  // 0 -> hardware concurrency
};

/// Sparsity target for one dimension: round(rho d^2), half away from zero.
int sparsity_for(double rho, int d);

/// Rejects configs with s < d, n_reps < 1, or nonpositive grids.
void validate_config(const ExperimentConfig& cfg);

struct SupportMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Support recovery of a_hat against the exact support of a0 at threshold
/// tau. Conventions: precision = 1 with no predictions, recall = 1 with an
/// empty true support.
SupportMetrics support_metrics(const Matrix& a_hat, const Matrix& a0,
                               double tau);

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Mle: return "mle";
    case Method::Lasso: return "lasso";
    default: return "dantzig";
  }
}

/// One estimator outcome within a replication.
struct MethodOutcome {
  bool ok = false;
  std::string error;
  double rel_l1 = 0.0;   // |a_hat - a0|_1 / |a0|_1
  double rel_fro = 0.0;  // Frobenius counterpart
  SupportMetrics support;
  SolveStatus status = SolveStatus::Converged;
};

struct RepOutcome {
  int d = 0;
  int rep = 0;
  double lambda = 0.0;
  MethodOutcome methods[3];  // indexed by Method order: mle, lasso, dantzig
};

struct SummaryRow {
  int d = 0;
  Method method = Method::Mle;
  std::string norm;  // "l1" | "frobenius" | "support_precision" | ...
  double mean = 0.0;
  double stddev = 0.0;  // sample std over replications (0 when reps == 1)
  int n_ok = 0;
};

struct ErrorReport {
  std::vector<SummaryRow> rows;
  std::vector<RepOutcome> raw;  // ordered by (d index, rep)
  std::vector<std::string> failures;
  double wall_seconds = 0.0;
};

/// Mean error at (d, method, norm); throws if the row is absent.
double report_mean(const ErrorReport& report, int d, Method method,
                   const std::string& norm);

/// Full error-vs-dimension study: for every d and replication, generate a
/// model, simulate, estimate with all three methods, and aggregate relative
/// errors and support metrics. Replications run concurrently on derived
/// seeds; aggregation order is fixed, so the report is deterministic.
ErrorReport run_fig2(const ExperimentConfig& cfg);

void write_fig2_outputs(const ErrorReport& report, const ExperimentConfig& cfg,
                        const std::filesystem::path& out_dir);

/// Single-replication heatmap study at one dimension.
struct HeatmapBundle {
  ModelSpec model;
  double lambda = 0.0;
  EstimateResult mle_result;
  EstimateResult lasso_result;
  EstimateResult dantzig_result;
  SupportMetrics mle_support;
  SupportMetrics lasso_support;
  SupportMetrics dantzig_support;
};

HeatmapBundle run_fig1(int d, const ExperimentConfig& cfg);

/// Emits fig1_<name>.csv and fig1_<name>.svg for a0/mle/lasso/dantzig on a
/// shared symmetric color scale, plus run_meta.json.
void write_fig1_outputs(const HeatmapBundle& bundle,
                        const ExperimentConfig& cfg,
                        const std::filesystem::path& out_dir);

/// Diverging blue-white-red heatmap of a matrix; scale [-vmax, vmax].
std::string heatmap_svg(const Matrix& m, double vmax, const std::string& title);

}  // namespace oudrift

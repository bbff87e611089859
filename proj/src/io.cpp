#include "oudrift/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "oudrift/norms.hpp"

namespace oudrift {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& name, const std::string& what) {
  throw ParseError(name + ": " + what);
}

std::vector<double> matrix_to_flat(const Matrix& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  return flat;
}

Matrix flat_to_matrix(const json& j, int rows, int cols,
                      const std::string& name, const std::string& field) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * cols)
    parse_fail(name, "field '" + field + "' must be a row-major array of " +
                         std::to_string(rows * cols) + " numbers");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c, ++k) {
      const auto& cell = j[k];
      if (!cell.is_number())
        parse_fail(name, "field '" + field + "' entry " + std::to_string(k) +
                             " is not a number");
      m(i, c) = cell.get<double>();
    }
  if (!m.allFinite())
    parse_fail(name, "field '" + field + "' has non-finite entries");
  return m;
}

double require_number(const json& j, const char* field, const std::string& name) {
  if (!j.contains(field) || !j[field].is_number())
    parse_fail(name, std::string("missing or non-numeric field '") + field + "'");
  return j[field].get<double>();
}

int require_int(const json& j, const char* field, const std::string& name) {
  if (!j.contains(field) || !j[field].is_number_integer())
    parse_fail(name, std::string("missing or non-integer field '") + field + "'");
  return j[field].get<int>();
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(const Matrix& m, std::ostream& out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FileError("cannot open for writing: " + file.string());
  write_matrix_csv(m, out);
  if (!out) throw FileError("write failed: " + file.string());
}

Matrix read_matrix_csv(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    int field_no = 0;
    while (pos <= line.size()) {
      ++field_no;
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      const char* first = line.data() + pos;
      const char* last = line.data() + next;
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      double value = 0.0;
      const auto res = std::from_chars(first, last, value);
      if (res.ec != std::errc() || res.ptr != last)
        parse_fail(name, "line " + std::to_string(line_no) + ", field " +
                             std::to_string(field_no) + ": not a number: '" +
                             std::string(line.data() + pos, next - pos) + "'");
      if (!std::isfinite(value))
        parse_fail(name, "line " + std::to_string(line_no) + ", field " +
                             std::to_string(field_no) + ": non-finite value");
      row.push_back(value);
      pos = next + 1;
      if (next == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      parse_fail(name, "line " + std::to_string(line_no) + ": expected " +
                           std::to_string(rows.front().size()) +
                           " fields, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_fail(name, "no rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FileError("cannot open: " + file.string());
  return read_matrix_csv(in, file.string());
}

void write_path_csv(const Path& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FileError("cannot open for writing: " + file.string());
  const int n = path.steps();
  const int d = path.dim();
  for (int k = 0; k <= n; ++k) {
    out << format_double(k * path.dt);
    for (int i = 0; i < d; ++i)
      out << ',' << format_double(path.states(i, k));
    out << '\n';
  }
  if (!out) throw FileError("write failed: " + file.string());
}

json model_to_json(const ModelSpec& model) {
  return json{{"d", model.d},
              {"s0", model.s0},
              {"entries", matrix_to_flat(model.a0)},
              {"seed", model.seed},
              {"margin", model.margin}};
}

ModelSpec model_from_json(const json& j, const std::string& name) {
  const int d = require_int(j, "d", name);
  if (d < 1) parse_fail(name, "d must be >= 1");
  if (!j.contains("entries")) parse_fail(name, "missing field 'entries'");
  ModelSpec model = make_model(flat_to_matrix(j["entries"], d, d, name, "entries"));
  if (j.contains("s0")) {
    const int s0 = require_int(j, "s0", name);
    if (s0 != model.s0)
      parse_fail(name, "s0 is " + std::to_string(s0) + " but the matrix has " +
                           std::to_string(model.s0) + " nonzero entries");
  }
  if (j.contains("seed")) model.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("margin")) model.margin = require_number(j, "margin", name);
  return model;
}

void write_model_json(const ModelSpec& model, const std::filesystem::path& file) {
  write_json_file(model_to_json(model), file);
}

ModelSpec read_model_json(const std::filesystem::path& file) {
  return model_from_json(read_json_file(file), file.string());
}

json stats_to_json(const SufficientStats& stats) {
  json j{{"d", stats.dim()},
         {"t_horizon", stats.t_horizon},
         {"c_hat", matrix_to_flat(stats.c_hat)},
         {"s_hat", matrix_to_flat(stats.s_hat)}};
  if (stats.eps_hat) j["eps_hat"] = matrix_to_flat(*stats.eps_hat);
  return j;
}

SufficientStats stats_from_json(const json& j, const std::string& name) {
  const int d = require_int(j, "d", name);
  if (d < 1) parse_fail(name, "d must be >= 1");
  SufficientStats stats;
  stats.t_horizon = require_number(j, "t_horizon", name);
  if (!(stats.t_horizon > 0)) parse_fail(name, "t_horizon must be > 0");
  if (!j.contains("c_hat") || !j.contains("s_hat"))
    parse_fail(name, "missing field 'c_hat' or 's_hat'");
  stats.c_hat = flat_to_matrix(j["c_hat"], d, d, name, "c_hat");
  stats.s_hat = flat_to_matrix(j["s_hat"], d, d, name, "s_hat");
  const double scale = std::max(1.0, norm_linf(stats.c_hat));
  if (norm_linf(stats.c_hat - stats.c_hat.transpose()) > 1e-10 * scale)
    parse_fail(name, "c_hat is not symmetric within tolerance");
  if (j.contains("eps_hat"))
    stats.eps_hat = flat_to_matrix(j["eps_hat"], d, d, name, "eps_hat");
  return stats;
}

void write_stats_json(const SufficientStats& stats, const std::filesystem::path& file) {
  write_json_file(stats_to_json(stats), file);
}

SufficientStats read_stats_json(const std::filesystem::path& file) {
  return stats_from_json(read_json_file(file), file.string());
}

json estimate_to_json(const EstimateResult& result) {
  return json{{"method", method_name(result.method)},
              {"lambda", result.lambda},
              {"d", static_cast<int>(result.a_hat.rows())},
              {"a_hat", matrix_to_flat(result.a_hat)},
              {"iterations", result.iterations},
              {"objective", result.objective},
              {"kkt_residual", result.kkt_residual},
              {"dantzig_feasibility", result.dantzig_feasibility},
              {"l1_norm", result.l1_norm},
              {"status", status_name(result.status)}};
}

void write_estimate_json(const EstimateResult& result, const std::filesystem::path& file) {
  write_json_file(estimate_to_json(result), file);
}

json bounds_report_to_json(const BoundsReport& report) {
  json curve = json::array();
  for (const auto& [x, value] : report.tail_exponent_curve)
    curve.push_back(json{{"x", x}, {"value", value}});
  return json{
      {"constants",
       {{"r0", report.constants.r0},
        {"p0", report.constants.p0},
        {"k_big", report.constants.k_big},
        {"k_small", report.constants.k_small},
        {"m_small", report.constants.m_small},
        {"m_big", report.constants.m_big}}},
      {"d", report.d},
      {"s", report.s},
      {"c0", report.c0},
      {"eps0", report.eps0},
      {"s0", report.s0},
      {"gamma", report.gamma},
      {"t_horizon", report.t_horizon},
      {"lambda_min", report.lambda_min},
      {"re_prefactor", report.re_threshold.prefactor},
      {"re_bracket", report.re_threshold.bracket},
      {"re_bracket_negative", report.re_threshold.bracket_negative},
      {"re_time_min", report.re_threshold.t_min},
      {"martingale_time_min", report.martingale_t_min},
      {"oracle",
       {{"lasso_oracle_const", report.oracle.lasso_oracle_const},
        {"dantzig_oracle_const", report.oracle.dantzig_oracle_const},
        {"l2_pred", report.oracle.l2_pred},
        {"frob", report.oracle.frob},
        {"l1", report.oracle.l1},
        {"sparsity", report.oracle.sparsity}}},
      {"tail_exponent", curve}};
}

ExperimentConfig config_from_json(const json& j, const std::string& name) {
  static const std::vector<std::string> known = {
      "d_values", "rho",    "t_horizon", "n_steps", "n_reps",
      "lambda_mode", "eps0", "lambda",   "seed",    "scheme",
      "margin",   "tau_supp", "threads"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      parse_fail(name, "unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  if (j.contains("d_values")) {
    if (!j["d_values"].is_array() || j["d_values"].empty())
      parse_fail(name, "d_values must be a nonempty array of integers");
    cfg.d_values.clear();
    for (const auto& v : j["d_values"]) {
      if (!v.is_number_integer()) parse_fail(name, "d_values must be integers");
      cfg.d_values.push_back(v.get<int>());
    }
  }
  if (j.contains("rho")) cfg.rho = require_number(j, "rho", name);
  if (j.contains("t_horizon")) cfg.t_horizon = require_number(j, "t_horizon", name);
  if (j.contains("n_steps")) cfg.n_steps = require_int(j, "n_steps", name);
  if (j.contains("n_reps")) cfg.n_reps = require_int(j, "n_reps", name);
  if (j.contains("lambda_mode"))
    cfg.lambda_mode = lambda_mode_from_name(j["lambda_mode"].get<std::string>());
  if (j.contains("eps0")) cfg.eps0 = require_number(j, "eps0", name);
  if (j.contains("lambda")) cfg.fixed_lambda = require_number(j, "lambda", name);
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("scheme"))
    cfg.scheme = scheme_from_name(j["scheme"].get<std::string>());
  if (j.contains("margin")) cfg.margin = require_number(j, "margin", name);
  if (j.contains("tau_supp")) cfg.tau_supp = require_number(j, "tau_supp", name);
  if (j.contains("threads")) cfg.threads = require_int(j, "threads", name);
  return cfg;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& file) {
  return config_from_json(read_json_file(file), file.string());
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw FileError("cannot open: " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw FileError("cannot open for writing: " + file.string());
  out << j.dump(2) << '\n';
  if (!out) throw FileError("write failed: " + file.string());
}

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::Exact ? "exact" : "euler";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "exact") return Scheme::Exact;
  if (name == "euler") return Scheme::Euler;
  throw ParseError("unknown scheme '" + name + "' (expected exact|euler)");
}

const char* lambda_mode_name(LambdaMode mode) {
  switch (mode) {
    case LambdaMode::Theoretical: return "theoretical";
    case LambdaMode::PlugIn: return "plugin";
    default: return "fixed";
  }
}

LambdaMode lambda_mode_from_name(const std::string& name) {
  if (name == "theoretical") return LambdaMode::Theoretical;
  if (name == "plugin") return LambdaMode::PlugIn;
  if (name == "fixed") return LambdaMode::Fixed;
  throw ParseError("unknown lambda mode '" + name +
                   "' (expected theoretical|plugin|fixed)");
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterLimit: return "iteration_limit";
    default: return "pivot_limit";
  }
}

}  // namespace oudrift

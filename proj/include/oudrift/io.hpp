#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "oudrift/bounds.hpp"
#include "oudrift/estimate.hpp"
#include "oudrift/experiments.hpp"
#include "oudrift/model.hpp"
#include "oudrift/simulate.hpp"
#include "oudrift/types.hpp"

namespace oudrift {

/// File content failed to parse or validate. Carries file/line/field context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened or written at all (wrong path, permissions).
class FileError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Shortest decimal string that round-trips the exact binary64 value.
std::string format_double(double x);

/// CSV: one row per line, comma separated, '.' decimal, no header.
void write_matrix_csv(const Matrix& m, std::ostream& out);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& file);
Matrix read_matrix_csv(std::istream& in, const std::string& name = "<stream>");
Matrix read_matrix_csv(const std::filesystem::path& file);

/// Path CSV: t, X^1, ..., X^d per line.
void write_path_csv(const Path& path, const std::filesystem::path& file);

nlohmann::json model_to_json(const ModelSpec& model);
ModelSpec model_from_json(const nlohmann::json& j, const std::string& name);
void write_model_json(const ModelSpec& model, const std::filesystem::path& file);
ModelSpec read_model_json(const std::filesystem::path& file);

nlohmann::json stats_to_json(const SufficientStats& stats);
SufficientStats stats_from_json(const nlohmann::json& j, const std::string& name);
void write_stats_json(const SufficientStats& stats, const std::filesystem::path& file);
SufficientStats read_stats_json(const std::filesystem::path& file);

nlohmann::json estimate_to_json(const EstimateResult& result);
void write_estimate_json(const EstimateResult& result, const std::filesystem::path& file);

nlohmann::json bounds_report_to_json(const BoundsReport& report);

/// Experiment config: defaults overlaid by the JSON file; unknown keys are
/// rejected. CLI flags are applied on top by the caller.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& name);
ExperimentConfig read_experiment_config(const std::filesystem::path& file);

nlohmann::json read_json_file(const std::filesystem::path& file);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& file);

const char* scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);
const char* lambda_mode_name(LambdaMode mode);
LambdaMode lambda_mode_from_name(const std::string& name);
const char* status_name(SolveStatus status);

}  // namespace oudrift

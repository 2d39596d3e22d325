#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fene/eigensolver.hpp"
#include "fene/model.hpp"
#include "fene/sde.hpp"

namespace fene {

/// Config validation failure carrying the dotted path of the offending key.
struct ConfigError : std::runtime_error {
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message), field(std::move(field_path)) {}
  std::string field;
};

struct RunConfig {
  enum class Mode { solve, spectrum, sweep, oracle, compare };

  Mode mode = Mode::solve;
  FeneParams model{};

  struct Drift {
    std::string type = "none";          // "none" | "linear"
    std::vector<double> matrix{};       // row-major n x n, linear only
    double wi = 1.0;                    // scalar multiplier, applied before the shift
  } drift;

  struct Discretization {
    int degree = 16;
    int quadrature_margin = 0;
  } discretization;

  SolverConfig solver{};
  std::optional<double> alpha_override{};
  SdeConfig sde{};

  struct Output {
    std::string report_path = "report.json";
    std::string field_csv_path{};
    std::string matrix_market_path{};
    std::vector<double> sweep_wi{};
  } output;

  /// Resolved drift field with the wi multiplier folded in.
  DriftField make_drift() const;

  /// Cross-field invariants beyond per-key checks.
  void validate() const;
};

RunConfig::Mode parse_mode(const std::string& name);
std::string mode_name(RunConfig::Mode mode);

/// Strict parse: unknown keys anywhere are rejected with their path.
RunConfig parse_config(const nlohmann::json& j);

/// Serialized echo of a fully resolved config (defaults included).
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace fene

#pragma once

#include <json.hpp>

#include "fene/config.hpp"
#include "fene/pipeline.hpp"
#include "fene/sde.hpp"

namespace fene {

inline constexpr const char* kStressConvention =
    "S = mu * (2*delta * int x(x)x/(1-|x|^2) psi dx - (int psi) I), rescaled unit-ball variables";

nlohmann::json eigen_report_to_json(const EigenReport& report);
nlohmann::json stress_to_json(const StressTensor& stress);
nlohmann::json mc_estimate_to_json(const McEstimate& estimate);

/// Executes one configured run and writes the report (and any CSV / matrix
/// dumps) relative to out_dir. Returns the report JSON. Throws ConfigError
/// for validation failures and solver errors (NonConvergenceError,
/// SingularOperatorError, SdeStepError) for computational ones.
nlohmann::json run(const RunConfig& config, const std::string& out_dir = ".");

}  // namespace fene

// Batch front end: reads a JSON run configuration, executes the requested
// pipeline and writes machine-readable reports. Exit codes: 0 success,
// 2 validation failure, 3 solver/oracle non-convergence.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "fene/runner.hpp"

namespace {

void emit_error(int code, const std::string& field, const std::string& message) {
  nlohmann::json diag{{"error", {{"code", code}, {"message", message}}}};
  if (!field.empty()) diag["error"]["field"] = field;
  std::cerr << diag.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state FENE dumbbell Fokker-Planck solver and verification suite"};

  std::string config_path;
  std::string mode_override;
  std::string out_dir = ".";
  int degree_override = -1;
  long long seed_override = -1;

  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--mode", mode_override, "override config mode (solve|spectrum|sweep|oracle|compare)");
  app.add_option("--degree", degree_override, "override discretization degree");
  app.add_option("--seed", seed_override, "override solver and oracle seeds");
  app.add_option("--out", out_dir, "directory for report and data files");

  CLI11_PARSE(app, argc, argv);

  nlohmann::json raw;
  {
    std::ifstream is(config_path);
    if (!is) {
      emit_error(2, "config", "cannot open config file: " + config_path);
      return 2;
    }
    try {
      is >> raw;
    } catch (const nlohmann::json::parse_error& e) {
      emit_error(2, "config", std::string("JSON parse error: ") + e.what());
      return 2;
    }
  }

  try {
    fene::RunConfig cfg = fene::parse_config(raw);
    if (!mode_override.empty()) cfg.mode = fene::parse_mode(mode_override);
    if (degree_override >= 0) cfg.discretization.degree = degree_override;
    if (seed_override >= 0) {
      cfg.solver.seed = static_cast<std::uint64_t>(seed_override);
      cfg.sde.seed = static_cast<std::uint64_t>(seed_override);
    }
    cfg.validate();

    const nlohmann::json report = fene::run(cfg, out_dir);
    std::cout << report.dump(2) << std::endl;
    return 0;
  } catch (const fene::ConfigError& e) {
    emit_error(2, e.field, e.what());
    return 2;
  } catch (const fene::NonConvergenceError& e) {
    emit_error(3, "", e.what());
    return 3;
  } catch (const fene::SingularOperatorError& e) {
    emit_error(3, "", e.what());
    return 3;
  } catch (const fene::SdeStepError& e) {
    emit_error(3, "", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error(1, "", e.what());
    return 1;
  }
}

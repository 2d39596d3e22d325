#include "fene/config.hpp"

#include <cmath>
#include <set>

namespace fene {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& path, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(path + "." + key, "must be a number");
  return j.at(key).get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path, const std::string& key,
                         std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(path + "." + key, "must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(path + "." + key, "must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

RunConfig::Mode parse_mode(const std::string& name) {
  if (name == "solve") return RunConfig::Mode::solve;
  if (name == "spectrum") return RunConfig::Mode::spectrum;
  if (name == "sweep") return RunConfig::Mode::sweep;
  if (name == "oracle") return RunConfig::Mode::oracle;
  if (name == "compare") return RunConfig::Mode::compare;
  throw ConfigError("mode", "must be one of solve|spectrum|sweep|oracle|compare");
}

std::string mode_name(RunConfig::Mode mode) {
  switch (mode) {
    case RunConfig::Mode::solve: return "solve";
    case RunConfig::Mode::spectrum: return "spectrum";
    case RunConfig::Mode::sweep: return "sweep";
    case RunConfig::Mode::oracle: return "oracle";
    case RunConfig::Mode::compare: return "compare";
  }
  return "solve";
}

DriftField RunConfig::make_drift() const {
  if (drift.type == "none") return DriftField::none(model.n);
  Eigen::MatrixXd base(model.n, model.n);
  for (int i = 0; i < model.n; ++i)
    for (int j = 0; j < model.n; ++j)
      base(i, j) = drift.matrix[static_cast<size_t>(i * model.n + j)];
  return DriftField::linear(drift.wi * base);
}

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }
  if (model.n != 2) throw ConfigError("model.n", "solver pipelines support n = 2 only");
  if (drift.type != "none" && drift.type != "linear")
    throw ConfigError("drift.type", "must be \"none\" or \"linear\"");
  if (drift.type == "linear") {
    if (drift.matrix.size() != static_cast<size_t>(model.n * model.n))
      throw ConfigError("drift.matrix", "must hold n*n row-major entries");
    if (!std::isfinite(drift.wi)) throw ConfigError("drift.wi", "must be finite");
    try {
      (void)make_drift();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("drift.matrix", e.what());
    }
  }
  if (discretization.degree < 0) throw ConfigError("discretization.degree", "must be >= 0");
  if (discretization.quadrature_margin < 0)
    throw ConfigError("discretization.quadrature_margin", "must be >= 0");
  if (!(solver.tol > 0.0)) throw ConfigError("solver.tol", "must be > 0");
  if (solver.max_iter < 1) throw ConfigError("solver.max_iter", "must be >= 1");
  if (alpha_override && !(*alpha_override > 0.0))
    throw ConfigError("solver.alpha_override", "must be > 0");
  if (mode == Mode::oracle || mode == Mode::compare) {
    try {
      sde.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sde", e.what());
    }
  }
  if (mode == Mode::sweep) {
    if (drift.type != "linear") throw ConfigError("drift.type", "sweep mode needs a linear drift");
    if (output.sweep_wi.empty()) throw ConfigError("output.sweep_wi", "sweep mode needs wi values");
    for (double wi : output.sweep_wi)
      if (!(wi > 0.0)) throw ConfigError("output.sweep_wi", "values must be > 0");
  }
  if (output.report_path.empty()) throw ConfigError("output.report_path", "must not be empty");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config root must be a JSON object");
  reject_unknown(j, "", {"mode", "model", "drift", "discretization", "solver", "sde", "output"});

  RunConfig cfg;
  cfg.mode = parse_mode(get_string(j, "", "mode", "solve"));

  if (j.contains("model")) {
    const auto& m = j.at("model");
    if (!m.is_object()) throw ConfigError("model", "must be an object");
    reject_unknown(m, "model", {"n", "delta", "b", "mu"});
    cfg.model.n = static_cast<int>(get_integer(m, "model", "n", 2));
    cfg.model.delta = get_number(m, "model", "delta", 8.0);
    cfg.model.b = get_number(m, "model", "b", 1.0);
    cfg.model.mu = get_number(m, "model", "mu", 1.0);
  }

  if (j.contains("drift")) {
    const auto& d = j.at("drift");
    if (!d.is_object()) throw ConfigError("drift", "must be an object");
    reject_unknown(d, "drift", {"type", "matrix", "wi"});
    cfg.drift.type = get_string(d, "drift", "type", "none");
    cfg.drift.wi = get_number(d, "drift", "wi", 1.0);
    if (d.contains("matrix")) {
      if (!d.at("matrix").is_array()) throw ConfigError("drift.matrix", "must be an array");
      for (const auto& v : d.at("matrix")) {
        if (!v.is_number()) throw ConfigError("drift.matrix", "entries must be numbers");
        cfg.drift.matrix.push_back(v.get<double>());
      }
    }
  }

  if (j.contains("discretization")) {
    const auto& d = j.at("discretization");
    if (!d.is_object()) throw ConfigError("discretization", "must be an object");
    reject_unknown(d, "discretization", {"degree", "quadrature_margin"});
    cfg.discretization.degree = static_cast<int>(get_integer(d, "discretization", "degree", 16));
    cfg.discretization.quadrature_margin =
        static_cast<int>(get_integer(d, "discretization", "quadrature_margin", 0));
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) throw ConfigError("solver", "must be an object");
    reject_unknown(s, "solver", {"tol", "max_iter", "seed", "alpha_override"});
    cfg.solver.tol = get_number(s, "solver", "tol", 1e-10);
    cfg.solver.max_iter = static_cast<int>(get_integer(s, "solver", "max_iter", 5000));
    cfg.solver.seed = static_cast<std::uint64_t>(get_integer(s, "solver", "seed", 0));
    if (s.contains("alpha_override"))
      cfg.alpha_override = get_number(s, "solver", "alpha_override", 0.0);
  }

  if (j.contains("sde")) {
    const auto& s = j.at("sde");
    if (!s.is_object()) throw ConfigError("sde", "must be an object");
    reject_unknown(s, "sde", {"dt", "n_paths", "n_steps", "burn_in", "seed", "max_halvings"});
    cfg.sde.dt = get_number(s, "sde", "dt", cfg.sde.dt);
    cfg.sde.n_paths = get_integer(s, "sde", "n_paths", cfg.sde.n_paths);
    cfg.sde.n_steps = get_integer(s, "sde", "n_steps", cfg.sde.n_steps);
    cfg.sde.burn_in = get_integer(s, "sde", "burn_in", cfg.sde.burn_in);
    cfg.sde.seed = static_cast<std::uint64_t>(get_integer(s, "sde", "seed", 1));
    cfg.sde.max_halvings = static_cast<int>(get_integer(s, "sde", "max_halvings", 8));
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output", "must be an object");
    reject_unknown(o, "output", {"report_path", "field_csv_path", "matrix_market_path", "sweep_wi"});
    cfg.output.report_path = get_string(o, "output", "report_path", cfg.output.report_path);
    cfg.output.field_csv_path = get_string(o, "output", "field_csv_path", "");
    cfg.output.matrix_market_path = get_string(o, "output", "matrix_market_path", "");
    if (o.contains("sweep_wi")) {
      if (!o.at("sweep_wi").is_array()) throw ConfigError("output.sweep_wi", "must be an array");
      for (const auto& v : o.at("sweep_wi")) {
        if (!v.is_number()) throw ConfigError("output.sweep_wi", "entries must be numbers");
        cfg.output.sweep_wi.push_back(v.get<double>());
      }
    }
  }

  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json j;
  j["mode"] = mode_name(cfg.mode);
  j["model"] = {{"n", cfg.model.n}, {"delta", cfg.model.delta}, {"b", cfg.model.b}, {"mu", cfg.model.mu}};
  json drift;
  drift["type"] = cfg.drift.type;
  if (cfg.drift.type == "linear") {
    drift["matrix"] = cfg.drift.matrix;
    drift["wi"] = cfg.drift.wi;
  }
  j["drift"] = drift;
  j["discretization"] = {{"degree", cfg.discretization.degree},
                         {"quadrature_margin", cfg.discretization.quadrature_margin}};
  json solver = {{"tol", cfg.solver.tol},
                 {"max_iter", cfg.solver.max_iter},
                 {"seed", cfg.solver.seed}};
  if (cfg.alpha_override) solver["alpha_override"] = *cfg.alpha_override;
  j["solver"] = solver;
  if (cfg.mode == RunConfig::Mode::oracle || cfg.mode == RunConfig::Mode::compare) {
    j["sde"] = {{"dt", cfg.sde.dt},         {"n_paths", cfg.sde.n_paths},
                {"n_steps", cfg.sde.n_steps}, {"burn_in", cfg.sde.burn_in},
                {"seed", cfg.sde.seed},     {"max_halvings", cfg.sde.max_halvings}};
  }
  json output = {{"report_path", cfg.output.report_path}};
  if (!cfg.output.field_csv_path.empty()) output["field_csv_path"] = cfg.output.field_csv_path;
  if (!cfg.output.matrix_market_path.empty())
    output["matrix_market_path"] = cfg.output.matrix_market_path;
  if (!cfg.output.sweep_wi.empty()) output["sweep_wi"] = cfg.output.sweep_wi;
  j["output"] = output;
  return j;
}

}  // namespace fene

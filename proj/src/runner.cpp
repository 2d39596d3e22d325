#include "fene/runner.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace fene {

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::string& out_dir, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : std::filesystem::path(out_dir) / p;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path.string());
  os << text;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const std::filesystem::path& path, const DistributionField& field) {
  std::string text = "r,theta,psi,ratio\n";
  const int nr = 101, nt = 128;
  std::vector<double> rs, ths;
  rs.reserve(nr * nt);
  ths.reserve(nr * nt);
  for (int i = 0; i < nr; ++i) {
    const double r = static_cast<double>(i) / (nr - 1);
    for (int k = 0; k < nt; ++k) {
      rs.push_back(r);
      ths.push_back(2.0 * M_PI * k / nt);
    }
  }
  const auto samples = evaluate_field(field, rs, ths);
  for (size_t q = 0; q < samples.size(); ++q) {
    text += format_double(rs[q]) + "," + format_double(ths[q]) + "," +
            format_double(samples[q].psi) + "," + format_double(samples[q].ratio) + "\n";
  }
  write_text_file(path, text);
}

int sweep_thread_cap() {
  if (const char* env = std::getenv("FENE_FPS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions opt;
  opt.degree = cfg.discretization.degree;
  opt.quadrature_margin = cfg.discretization.quadrature_margin;
  opt.solver = cfg.solver;
  opt.alpha_override = cfg.alpha_override;
  return opt;
}

json base_report(const RunConfig& cfg) {
  json j;
  j["metadata"] = {{"tool", "fene_fps"}, {"format", 1}, {"mode", mode_name(cfg.mode)}};
  j["config"] = config_to_json(cfg);
  return j;
}

void attach_solution(json& j, const RunConfig& cfg, const SolveOutcome& outcome) {
  j["shift"] = {{"lambda0", outcome.shift.lambda0},
                {"alpha", cfg.alpha_override.value_or(outcome.shift.alpha)}};
  j["eigen"] = eigen_report_to_json(outcome.report);
  j["stress"] = stress_to_json(outcome.stress);
  j["warnings"] = {{"conditioning", outcome.mats.conditioning_warning},
                   {"delta_below_theory", cfg.model.delta_below_theory()}};
}

json run_solve(const RunConfig& cfg, const std::string& out_dir, bool with_spectrum) {
  SolveOutcome outcome = solve_steady_state(cfg.model, cfg.make_drift(), solve_options(cfg));
  if (with_spectrum) {
    const auto spectrum = full_spectrum(outcome.mats);
    outcome.report.spectrum = spectrum;
    double min_re = std::numeric_limits<double>::infinity();
    for (const auto& z : spectrum) min_re = std::min(min_re, z.real());
    outcome.report.min_real_part = min_re;
  }
  json j = base_report(cfg);
  attach_solution(j, cfg, outcome);
  if (with_spectrum) {
    // distance from the eigenvalue nearest zero to the rest of the spectrum
    const auto& sp = outcome.report.spectrum;
    size_t i0 = 0;
    for (size_t i = 1; i < sp.size(); ++i)
      if (std::abs(sp[i]) < std::abs(sp[i0])) i0 = i;
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sp.size(); ++i)
      if (i != i0) gap = std::min(gap, std::abs(sp[i] - sp[i0]));
    j["eigen"]["zero_magnitude"] = std::abs(sp[i0]);
    j["eigen"]["zero_gap"] = gap;
  }
  if (!cfg.output.field_csv_path.empty())
    write_field_csv(resolve(out_dir, cfg.output.field_csv_path), outcome.field);
  if (!cfg.output.matrix_market_path.empty()) {
    const auto path = resolve(out_dir, cfg.output.matrix_market_path);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    os << "%% stiffness, drift, mass, shifted blocks follow\n";
    write_matrix_market(os, outcome.mats.stiffness);
    write_matrix_market(os, outcome.mats.drift);
    write_matrix_market(os, outcome.mats.mass);
    write_matrix_market(os, outcome.mats.shifted);
  }
  return j;
}

json run_sweep(const RunConfig& cfg, const std::string& out_dir) {
  Eigen::MatrixXd base(cfg.model.n, cfg.model.n);
  for (int i = 0; i < cfg.model.n; ++i)
    for (int k = 0; k < cfg.model.n; ++k)
      base(i, k) = cfg.drift.matrix[static_cast<size_t>(i * cfg.model.n + k)];

  const auto& wis = cfg.output.sweep_wi;
  struct Point {
    double wi;
    StressTensor stress;
    MaterialFunctions mf;
  };
  std::vector<Point> points(wis.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < wis.size(); i = next.fetch_add(1)) {
      if (failed.load()) return;
      try {
        Point p;
        p.wi = wis[i];
        p.mf = material_functions(cfg.model, base, wis[i], solve_options(cfg), &p.stress);
        points[i] = std::move(p);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed = true;
        error_message = e.what();
      }
    }
  };
  const int n_threads = std::min<int>(sweep_thread_cap(), static_cast<int>(wis.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failed) throw NonConvergenceError("sweep: " + error_message, 0.0);

  json j = base_report(cfg);
  json rows = json::array();
  std::string csv = "wi,S11,S12,S22,eta_p,psi1\n";
  for (const auto& p : points) {
    const auto& s = p.stress.components;
    rows.push_back({{"wi", p.wi},
                    {"S11", s(0, 0)},
                    {"S12", s(0, 1)},
                    {"S22", s(1, 1)},
                    {"eta_p", p.mf.eta_p},
                    {"psi1", p.mf.psi1}});
    csv += format_double(p.wi) + "," + format_double(s(0, 0)) + "," + format_double(s(0, 1)) +
           "," + format_double(s(1, 1)) + "," + format_double(p.mf.eta_p) + "," +
           format_double(p.mf.psi1) + "\n";
  }
  j["sweep"] = rows;
  j["stress_convention"] = kStressConvention;
  if (!cfg.output.field_csv_path.empty())
    write_text_file(resolve(out_dir, cfg.output.field_csv_path), csv);
  return j;
}

json oracle_block(const RunConfig& cfg, const EnsembleSummary& ensemble) {
  json j;
  j["moments"] = {{"mean_sq_radius", mc_estimate_to_json(estimate_mean_sq_radius(ensemble))},
                  {"mean_position", mc_estimate_to_json(estimate_position(ensemble))}};
  j["stress"] = mc_estimate_to_json(estimate_stress(ensemble, cfg.model));
  j["rejection"] = {{"rate", ensemble.rejection_rate},
                    {"rejected_steps", ensemble.rejected_steps},
                    {"attempted_steps", ensemble.attempted_steps}};
  j["retained_samples"] = ensemble.retained_samples;
  j["effective_samples"] = ensemble.effective_samples;
  return j;
}

json run_oracle(const RunConfig& cfg) {
  const EnsembleSummary ensemble = simulate_stationary(cfg.model, cfg.make_drift(), cfg.sde);
  json j = base_report(cfg);
  j["oracle"] = oracle_block(cfg, ensemble);
  return j;
}

json run_compare(const RunConfig& cfg) {
  const SolveOutcome outcome = solve_steady_state(cfg.model, cfg.make_drift(), solve_options(cfg));
  const EnsembleSummary ensemble = simulate_stationary(cfg.model, cfg.make_drift(), cfg.sde);
  const McEstimate stress = estimate_stress(ensemble, cfg.model);

  json j = base_report(cfg);
  attach_solution(j, cfg, outcome);
  j["oracle"] = oracle_block(cfg, ensemble);

  Eigen::MatrixXd sigma(2, 2);
  double max_sigma = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const double se = std::max(stress.std_error(r, c), 1e-300);
      sigma(r, c) = std::abs(outcome.stress.components(r, c) - stress.value(r, c)) / se;
      max_sigma = std::max(max_sigma, sigma(r, c));
    }
  j["deltas"] = {{"stress_sigma_units",
                  {{sigma(0, 0), sigma(0, 1)}, {sigma(1, 0), sigma(1, 1)}}},
                 {"max_sigma", max_sigma}};
  return j;
}

}  // namespace

json eigen_report_to_json(const EigenReport& report) {
  json spectrum = json::array();
  for (const auto& z : report.spectrum) spectrum.push_back({z.real(), z.imag()});
  return json{{"principal_lambda", report.principal_lambda},
              {"eigen_residual", report.eigen_residual},
              {"iterations", report.iterations},
              {"min_ratio", report.min_ratio},
              {"max_ratio", report.max_ratio},
              {"min_real_part", report.min_real_part},
              {"spectrum", spectrum},
              {"mass", report.mass}};
}

json stress_to_json(const StressTensor& stress) {
  const auto& s = stress.components;
  return json{{"convention", kStressConvention},
              {"components", {{s(0, 0), s(0, 1)}, {s(1, 0), s(1, 1)}}}};
}

json mc_estimate_to_json(const McEstimate& estimate) {
  auto matrix_to_json = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  return json{{"value", matrix_to_json(estimate.value)},
              {"std_error", matrix_to_json(estimate.std_error)},
              {"n_effective", estimate.n_effective}};
}

json run(const RunConfig& config, const std::string& out_dir) {
  config.validate();
  json report;
  switch (config.mode) {
    case RunConfig::Mode::solve: report = run_solve(config, out_dir, false); break;
    case RunConfig::Mode::spectrum: report = run_solve(config, out_dir, true); break;
    case RunConfig::Mode::sweep: report = run_sweep(config, out_dir); break;
    case RunConfig::Mode::oracle: report = run_oracle(config); break;
    case RunConfig::Mode::compare: report = run_compare(config); break;
  }
  write_text_file(resolve(out_dir, config.output.report_path), report.dump(2) + "\n");
  return report;
}

}  // namespace fene

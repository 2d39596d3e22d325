#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fene/model.hpp"

namespace fene {

/// The stationary problem rewrites as the Fokker-Planck equation of
///   dX = [ k(X) - 2 delta X / (1 - |X|^2) ] dt + sqrt(2) dW
/// on the unit ball; time averages of this process cross-check the Galerkin
/// solution independently. (The stochastic formulation is an implementation
/// derivation, not part of the analytical development.)
struct SdeConfig {
  double dt = 2.5e-4;
  std::int64_t n_paths = 2048;
  std::int64_t n_steps = 20000;
  std::int64_t burn_in = 4000;
  std::uint64_t seed = 1;
  int max_halvings = 8;
  void validate() const;
};

struct SdeStepError : std::runtime_error {
  SdeStepError(const std::string& what, double rate) : std::runtime_error(what), rejection_rate(rate) {}
  double rejection_rate;
};

struct PolarBinSpec {
  int n_radial = 0;
  int n_angular = 0;
  bool enabled() const { return n_radial > 0 && n_angular > 0; }
};

/// Value with a batch-means standard error (shapes match).
struct McEstimate {
  Eigen::MatrixXd value;
  Eigen::MatrixXd std_error;
  std::int64_t n_effective = 0;
};

/// Post-burn-in time-ensemble accumulators. Batches are contiguous time
/// windows pooled over paths; paths use independent seeded substreams and
/// are reduced in path order, so results are bitwise reproducible.
struct EnsembleSummary {
  double delta = 0.0;
  double dt = 0.0;
  std::int64_t n_batches = 0;
  std::int64_t retained_samples = 0;
  std::int64_t attempted_steps = 0;
  std::int64_t rejected_steps = 0;
  double rejection_rate = 0.0;

  Eigen::Vector2d mean_position = Eigen::Vector2d::Zero();
  double mean_sq_radius = 0.0;
  Eigen::Matrix2d second_moment = Eigen::Matrix2d::Zero();  // <x x^T>
  Eigen::Matrix2d spring_moment = Eigen::Matrix2d::Zero();  // <x x^T / (1 - r^2)>

  std::vector<Eigen::Vector2d> batch_position;
  std::vector<double> batch_sq_radius;
  std::vector<Eigen::Matrix2d> batch_spring;

  double sq_radius_variance = 0.0;
  std::int64_t effective_samples = 0;  // retained / (1 + 2 tau), from batch variance

  PolarBinSpec bins;
  std::vector<std::int64_t> bin_counts;
  std::int64_t bin_total = 0;
};

/// Euler-Maruyama with near-boundary step control: a proposal landing at
/// |X| >= 1 - 1e-12 is retried with halved dt up to max_halvings, then the
/// step is rejected outright and counted. Throws SdeStepError when the
/// outright-rejection rate exceeds 1%.
EnsembleSummary simulate_stationary(const FeneParams& params, const DriftField& drift,
                                    const SdeConfig& config, const PolarBinSpec& bins = {});

McEstimate estimate_mean_sq_radius(const EnsembleSummary& ensemble);
McEstimate estimate_position(const EnsembleSummary& ensemble);

/// Time-ensemble average of mu * b * [2 delta X (x) X / (1 - |X|^2) - I].
McEstimate estimate_stress(const EnsembleSummary& ensemble, const FeneParams& params);

struct HistogramEstimate {
  PolarBinSpec bins;
  std::vector<double> probability;  // normalized to total mass 1
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;
  double chi_square = std::numeric_limits<double>::quiet_NaN();
  int dof = 0;
  int excluded_bins = 0;
  double bin_area(int radial, int angular) const;
  double bin_center_r(int radial) const;
  double bin_center_theta(int angular) const;
};

/// Normalized polar histogram of the retained samples. When a reference
/// density (psi / b, a probability density on the disk) is supplied, a
/// chi-square discrepancy against it is computed using the effective sample
/// count; bins with fewer than 10 samples are excluded.
HistogramEstimate estimate_density_histogram(
    const EnsembleSummary& ensemble,
    const std::function<double(double r, double theta)>& reference_density = {});

}  // namespace fene

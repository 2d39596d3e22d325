#include "fene/sde.hpp"

#include <cmath>

namespace fene {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Box-Muller on explicit 53-bit uniforms: identical streams on every
// platform, unlike std::normal_distribution.
struct GaussianStream {
  explicit GaussianStream(std::uint64_t seed) : state(seed) {}
  std::uint64_t state;

  double uniform() {
    state = splitmix64(state) ^ (state << 1);
    return (splitmix64(state) >> 11) * 0x1.0p-53;
  }

  void pair(double& z0, double& z1) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double rho = std::sqrt(-2.0 * std::log(1.0 - u1));  // 1 - u1 in (0, 1]
    z0 = rho * std::cos(2.0 * M_PI * u2);
    z1 = rho * std::sin(2.0 * M_PI * u2);
  }
};

struct Accumulator {
  double x = 0, y = 0, r2 = 0, r4 = 0;
  double xx = 0, xy = 0, yy = 0;     // x x^T
  double sxx = 0, sxy = 0, syy = 0;  // x x^T / (1 - r^2)
  std::int64_t count = 0;

  void add(double px, double py) {
    const double rr = px * px + py * py;
    const double f = 1.0 / (1.0 - rr);
    x += px;
    y += py;
    r2 += rr;
    r4 += rr * rr;
    xx += px * px;
    xy += px * py;
    yy += py * py;
    sxx += px * px * f;
    sxy += px * py * f;
    syy += py * py * f;
    ++count;
  }

  void merge(const Accumulator& o) {
    x += o.x; y += o.y; r2 += o.r2; r4 += o.r4;
    xx += o.xx; xy += o.xy; yy += o.yy;
    sxx += o.sxx; sxy += o.sxy; syy += o.syy;
    count += o.count;
  }
};

}  // namespace

void SdeConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("sde.dt: must be > 0");
  if (n_paths < 1) throw std::invalid_argument("sde.n_paths: must be >= 1");
  if (n_steps < 1) throw std::invalid_argument("sde.n_steps: must be >= 1");
  if (burn_in < 0 || burn_in >= n_steps)
    throw std::invalid_argument("sde.burn_in: must satisfy 0 <= burn_in < n_steps");
  if (n_steps - burn_in < 20)
    throw std::invalid_argument("sde.n_steps: need at least 20 retained steps for batch means");
  if (max_halvings < 0) throw std::invalid_argument("sde.max_halvings: must be >= 0");
}

EnsembleSummary simulate_stationary(const FeneParams& params, const DriftField& drift,
                                    const SdeConfig& config, const PolarBinSpec& bins) {
  params.validate();
  config.validate();
  if (params.n != 2 || drift.dim() != 2)
    throw std::invalid_argument("simulate_stationary: only n = 2 supported");

  const double delta = params.delta;
  const bool linear = drift.is_linear();
  double a00 = 0, a01 = 0, a10 = 0, a11 = 0;
  if (linear) {
    const auto& A = drift.matrix();
    a00 = A(0, 0); a01 = A(0, 1); a10 = A(1, 0); a11 = A(1, 1);
  }

  const std::int64_t retained_steps = config.n_steps - config.burn_in;
  const std::int64_t n_batches = 20;
  const std::int64_t batch_len = std::max<std::int64_t>(1, retained_steps / n_batches);

  EnsembleSummary out;
  out.delta = delta;
  out.dt = config.dt;
  out.n_batches = n_batches;
  out.bins = bins;
  std::vector<Accumulator> batches(static_cast<size_t>(n_batches));
  if (bins.enabled())
    out.bin_counts.assign(static_cast<size_t>(bins.n_radial) * bins.n_angular, 0);

  const double limit2 = (1.0 - 1e-12) * (1.0 - 1e-12);
  std::int64_t rejected = 0;
  Eigen::VectorXd xbuf(2);

  for (std::int64_t path = 0; path < config.n_paths; ++path) {
    GaussianStream rng(splitmix64(config.seed ^ (0x9e3779b97f4a7c15ULL * (path + 1))));
    double px = 0.0, py = 0.0;
    for (std::int64_t step = 0; step < config.n_steps; ++step) {
      double dx, dy;
      if (linear) {
        dx = a00 * px + a01 * py;
        dy = a10 * px + a11 * py;
      } else {
        xbuf << px, py;
        const Eigen::VectorXd k = drift(xbuf);
        dx = k[0];
        dy = k[1];
      }
      const double r2 = px * px + py * py;
      const double spring = 2.0 * delta / (1.0 - r2);
      dx -= spring * px;
      dy -= spring * py;

      double dt_try = config.dt;
      bool accepted = false;
      for (int h = 0; h <= config.max_halvings; ++h) {
        double z0, z1;
        rng.pair(z0, z1);
        const double s = std::sqrt(2.0 * dt_try);
        const double qx = px + dt_try * dx + s * z0;
        const double qy = py + dt_try * dy + s * z1;
        if (qx * qx + qy * qy < limit2) {
          px = qx;
          py = qy;
          accepted = true;
          break;
        }
        dt_try *= 0.5;
      }
      if (!accepted) ++rejected;

      if (step >= config.burn_in) {
        const std::int64_t b = std::min((step - config.burn_in) / batch_len, n_batches - 1);
        batches[static_cast<size_t>(b)].add(px, py);
        if (bins.enabled()) {
          const double r = std::sqrt(px * px + py * py);
          double th = std::atan2(py, px);
          if (th < 0.0) th += 2.0 * M_PI;
          int ir = std::min(static_cast<int>(r * bins.n_radial), bins.n_radial - 1);
          int it = std::min(static_cast<int>(th / (2.0 * M_PI) * bins.n_angular), bins.n_angular - 1);
          ++out.bin_counts[static_cast<size_t>(ir) * bins.n_angular + it];
          ++out.bin_total;
        }
      }
    }
  }

  Accumulator total;
  out.batch_position.reserve(static_cast<size_t>(n_batches));
  out.batch_sq_radius.reserve(static_cast<size_t>(n_batches));
  out.batch_spring.reserve(static_cast<size_t>(n_batches));
  for (const auto& b : batches) {
    total.merge(b);
    const double c = static_cast<double>(std::max<std::int64_t>(b.count, 1));
    out.batch_position.emplace_back(b.x / c, b.y / c);
    out.batch_sq_radius.push_back(b.r2 / c);
    Eigen::Matrix2d sm;
    sm << b.sxx / c, b.sxy / c, b.sxy / c, b.syy / c;
    out.batch_spring.push_back(sm);
  }

  out.retained_samples = total.count;
  out.attempted_steps = config.n_paths * config.n_steps;
  out.rejected_steps = rejected;
  out.rejection_rate = static_cast<double>(rejected) / static_cast<double>(out.attempted_steps);
  const double c = static_cast<double>(total.count);
  out.mean_position << total.x / c, total.y / c;
  out.mean_sq_radius = total.r2 / c;
  out.second_moment << total.xx / c, total.xy / c, total.xy / c, total.yy / c;
  out.spring_moment << total.sxx / c, total.sxy / c, total.sxy / c, total.syy / c;
  out.sq_radius_variance = total.r4 / c - out.mean_sq_radius * out.mean_sq_radius;

  // Effective count from batch-means: n_eff = var_sample / SE^2.
  double bvar = 0.0;
  for (double v : out.batch_sq_radius) bvar += (v - out.mean_sq_radius) * (v - out.mean_sq_radius);
  bvar /= static_cast<double>(n_batches - 1);
  const double se2 = bvar / static_cast<double>(n_batches);
  out.effective_samples =
      se2 > 0.0 ? static_cast<std::int64_t>(std::max(1.0, out.sq_radius_variance / se2))
                : out.retained_samples;

  if (out.rejection_rate > 0.01)
    throw SdeStepError("simulate_stationary: rejection rate above 1%, reduce dt",
                       out.rejection_rate);
  return out;
}

namespace {

McEstimate batch_estimate(const std::vector<Eigen::MatrixXd>& batch_means,
                          const Eigen::MatrixXd& mean, std::int64_t n_effective) {
  const auto nb = static_cast<double>(batch_means.size());
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(mean.rows(), mean.cols());
  for (const auto& b : batch_means) {
    const Eigen::MatrixXd d = b - mean;
    var += d.cwiseProduct(d);
  }
  var /= (nb - 1.0);
  McEstimate est;
  est.value = mean;
  est.std_error = (var / nb).cwiseSqrt();
  est.n_effective = n_effective;
  return est;
}

}  // namespace

McEstimate estimate_mean_sq_radius(const EnsembleSummary& ensemble) {
  std::vector<Eigen::MatrixXd> bm;
  for (double v : ensemble.batch_sq_radius) bm.push_back(Eigen::MatrixXd::Constant(1, 1, v));
  return batch_estimate(bm, Eigen::MatrixXd::Constant(1, 1, ensemble.mean_sq_radius),
                        ensemble.effective_samples);
}

McEstimate estimate_position(const EnsembleSummary& ensemble) {
  std::vector<Eigen::MatrixXd> bm;
  for (const auto& v : ensemble.batch_position) bm.push_back(v);
  return batch_estimate(bm, ensemble.mean_position, ensemble.effective_samples);
}

McEstimate estimate_stress(const EnsembleSummary& ensemble, const FeneParams& params) {
  params.validate();
  const double scale = params.mu * params.b;
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  std::vector<Eigen::MatrixXd> bm;
  for (const auto& v : ensemble.batch_spring)
    bm.push_back(scale * (2.0 * ensemble.delta * v - eye));
  const Eigen::MatrixXd mean = scale * (2.0 * ensemble.delta * ensemble.spring_moment - eye);
  return batch_estimate(bm, mean, ensemble.effective_samples);
}

double HistogramEstimate::bin_area(int radial, int angular) const {
  (void)angular;
  const double r0 = static_cast<double>(radial) / bins.n_radial;
  const double r1 = static_cast<double>(radial + 1) / bins.n_radial;
  return 0.5 * (r1 * r1 - r0 * r0) * (2.0 * M_PI / bins.n_angular);
}

double HistogramEstimate::bin_center_r(int radial) const {
  return (radial + 0.5) / bins.n_radial;
}

double HistogramEstimate::bin_center_theta(int angular) const {
  return 2.0 * M_PI * (angular + 0.5) / bins.n_angular;
}

HistogramEstimate estimate_density_histogram(
    const EnsembleSummary& ensemble,
    const std::function<double(double r, double theta)>& reference_density) {
  if (!ensemble.bins.enabled())
    throw std::invalid_argument("estimate_density_histogram: simulation ran without bins");
  HistogramEstimate hist;
  hist.bins = ensemble.bins;
  hist.counts = ensemble.bin_counts;
  hist.total = ensemble.bin_total;
  hist.probability.resize(hist.counts.size());
  for (size_t i = 0; i < hist.counts.size(); ++i)
    hist.probability[i] = static_cast<double>(hist.counts[i]) / static_cast<double>(hist.total);

  if (reference_density) {
    // Correlated samples: scale the multinomial statistic by the effective
    // count rather than the raw count.
    const double neff = static_cast<double>(ensemble.effective_samples);
    double chi2 = 0.0;
    int used = 0, excluded = 0;
    for (int ir = 0; ir < hist.bins.n_radial; ++ir) {
      for (int it = 0; it < hist.bins.n_angular; ++it) {
        const size_t idx = static_cast<size_t>(ir) * hist.bins.n_angular + it;
        if (hist.counts[idx] < 10) {
          ++excluded;
          continue;
        }
        const double expected =
            reference_density(hist.bin_center_r(ir), hist.bin_center_theta(it)) *
            hist.bin_area(ir, it);
        if (expected <= 0.0) {
          ++excluded;
          continue;
        }
        const double diff = hist.probability[idx] - expected;
        chi2 += neff * diff * diff / expected;
        ++used;
      }
    }
    hist.chi_square = chi2;
    hist.dof = std::max(0, used - 1);
    hist.excluded_bins = excluded;
  }
  return hist;
}

}  // namespace fene

#include "fene/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fene/observables.hpp"

namespace fene {

namespace {

double mass_norm(const Eigen::MatrixXd& mass, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(mass * v));
}

Eigen::VectorXd seeded_uniform(int size, std::uint64_t seed) {
  std::mt19937_64 eng(seed ^ 0x5deece66dULL);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) {
    const double u = (eng() >> 11) * 0x1.0p-53;
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

}  // namespace

Resolvent::Resolvent(const OperatorMatrices& mats)
    : mats_(&mats), lu_(mats.shifted), lu_transpose_(mats.shifted.transpose()) {
  const Eigen::VectorXd piv = lu_.matrixLU().diagonal().cwiseAbs();
  const double top = piv.maxCoeff();
  if (top == 0.0 || piv.minCoeff() < 1e-14 * top)
    throw SingularOperatorError(
        "resolvent: shifted matrix is numerically singular (alpha below the coercivity bound or "
        "assembly defect)");
}

Eigen::VectorXd Resolvent::apply(const Eigen::VectorXd& f) const {
  return lu_.solve(mats_->mass * f);
}

Eigen::VectorXd Resolvent::apply_adjoint(const Eigen::VectorXd& f) const {
  return lu_transpose_.solve(mats_->mass * f);
}

std::pair<DistributionField, EigenReport> principal_eigenpair(const OperatorMatrices& mats,
                                                              double total_mass,
                                                              const SolverConfig& config,
                                                              const GridSpec& grid) {
  if (!(total_mass > 0.0)) throw std::invalid_argument("principal_eigenpair: total mass must be > 0");
  const Resolvent resolvent(mats);
  const int dim = mats.spec.size();
  const Eigen::MatrixXd& mass = mats.mass;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  c[0] = total_mass / mats.spec.mass_factor();
  const Eigen::VectorXd noise = seeded_uniform(dim, config.seed);
  c += (1e-3 * mass_norm(mass, c) / std::max(mass_norm(mass, noise), 1e-300)) * noise;
  c /= mass_norm(mass, c);

  EigenReport report;
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < config.max_iter; ++it) {
    const Eigen::VectorXd z = resolvent.apply(c);
    const double mu = c.dot(mass * z);
    c = z / mass_norm(mass, z);
    lambda = 1.0 / mu - mats.alpha;
    const Eigen::VectorXd nc = mass * c;
    residual = (mats.stiffness * c + mats.drift * c - lambda * nc).norm() / nc.norm();
    if (residual <= config.tol) {
      ++it;
      break;
    }
  }
  if (residual > config.tol)
    throw NonConvergenceError("principal_eigenpair: power iteration did not reach tolerance",
                              residual);

  double mass_value = mats.spec.mass_factor() * c[0];
  if (mass_value < 0.0) {
    c = -c;
    mass_value = -mass_value;
  }
  if (mass_value == 0.0)
    throw NonConvergenceError("principal_eigenpair: converged eigenvector has zero mass", residual);
  c *= total_mass / mass_value;

  DistributionField field{mats.spec, c};
  report.principal_lambda = lambda;
  report.eigen_residual = residual;
  report.iterations = it;
  const auto [lo, hi] = ratio_bounds(field, grid);
  report.min_ratio = lo;
  report.max_ratio = hi;
  report.mass = field.mass();
  return {std::move(field), report};
}

std::vector<std::complex<double>> full_spectrum(const OperatorMatrices& mats) {
  const int dim = mats.spec.size();
  if (dim > 600)
    throw std::invalid_argument(
        "full_spectrum: dimension too large for the dense path (use principal_eigenpair)");

  const Eigen::LLT<Eigen::MatrixXd> llt(mats.mass);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("full_spectrum: mass matrix is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  // C = L^{-1} (S + D) L^{-T}, same spectrum as the pencil
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(mats.stiffness + mats.drift);
  C = L.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();

  const Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) throw std::runtime_error("full_spectrum: eigensolve failed");
  std::vector<std::complex<double>> spectrum(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) spectrum[static_cast<size_t>(i)] = es.eigenvalues()[i];
  std::sort(spectrum.begin(), spectrum.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return spectrum;
}

double spectral_radius_estimate(const OperatorMatrices& mats, int m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("spectral_radius_estimate: m must be >= 1");
  const Resolvent resolvent(mats);
  const Eigen::MatrixXd& mass = mats.mass;

  Eigen::VectorXd v = seeded_uniform(mats.spec.size(), seed + 1);
  v /= mass_norm(mass, v);
  double estimate = 0.0;
  for (int outer = 0; outer < 200; ++outer) {
    Eigen::VectorXd w = v;
    for (int k = 0; k < m; ++k) w = resolvent.apply(w);
    const double growth = mass_norm(mass, w);  // |B^m v|, v unit: Rayleigh for the normal operator
    for (int k = 0; k < m; ++k) w = resolvent.apply_adjoint(w);
    const double next = std::pow(growth, 1.0 / m);
    v = w / mass_norm(mass, w);
    if (outer > 3 && std::abs(next - estimate) <= 1e-13 * std::abs(next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace fene

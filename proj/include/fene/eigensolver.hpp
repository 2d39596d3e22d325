#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "fene/assembly.hpp"
#include "fene/basis.hpp"

namespace fene {

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 5000;
  std::uint64_t seed = 0;
};

/// Polar evaluation grid; the radial range [0, 1] includes the boundary ring.
struct GridSpec {
  int n_radial = 200;
  int n_angular = 200;
};

struct EigenReport {
  double principal_lambda = 0.0;
  double eigen_residual = 0.0;
  int iterations = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double min_real_part = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::complex<double>> spectrum;  // dense path only
  double mass = 0.0;
};

struct SingularOperatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
  double last_residual;
};

/// The shifted inverse (L + alpha I)^{-1} realized through an LU
/// factorization of the shifted Galerkin matrix; apply() solves
/// A u = N f, i.e. maps f expanded in the trial space to u.
class Resolvent {
 public:
  explicit Resolvent(const OperatorMatrices& mats);

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  /// Adjoint in the mass inner product: solves A^T u = N f.
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& f) const;
  const OperatorMatrices& matrices() const { return *mats_; }

 private:
  const OperatorMatrices* mats_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_transpose_;
};

/// Principal eigenpair of the pencil (S + D) c = lambda N c by power
/// iteration on the resolvent, started from the equilibrium state with
/// seeded 1e-3 relative noise and normalized in the mass norm each step.
/// The returned field is sign-fixed to positive mass and scaled so its
/// integral equals total_mass. Throws NonConvergenceError when the residual
/// fails to reach config.tol within config.max_iter.
std::pair<DistributionField, EigenReport> principal_eigenpair(const OperatorMatrices& mats,
                                                              double total_mass,
                                                              const SolverConfig& config,
                                                              const GridSpec& grid = {});

/// All eigenvalues of the pencil by a dense solve (Cholesky of N, then a
/// real Schur factorization); refuses dimensions above the desk-scale cap.
std::vector<std::complex<double>> full_spectrum(const OperatorMatrices& mats);

/// Estimate of |B^m|^{1/m} in the mass norm (B the resolvent), the
/// quantity whose limit in m is the spectral radius. Computed as the
/// dominant singular value of the m-fold application via power iteration
/// on the normal operator, seeded and deterministic.
double spectral_radius_estimate(const OperatorMatrices& mats, int m, std::uint64_t seed = 0);

}  // namespace fene

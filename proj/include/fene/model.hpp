#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace fene {

/// Model parameters of the finitely extensible dumbbell problem on the
/// unit ball: weight M(x) = (1 - |x|^2)^delta, total mass b, stress
/// prefactor mu, spatial dimension n.
struct FeneParams {
  int n = 2;
  double delta = 8.0;
  double b = 1.0;
  double mu = 1.0;

  /// True when delta sits below the range covered by the two-sided-bound
  /// theory; the numerics stay well defined, so this is a warning, not an
  /// error.
  bool delta_below_theory() const { return delta < 8.0; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Homogeneous drift k(x) on the unit ball. Either linear k = A x with a
/// traceless matrix A, or a user-supplied evaluator with sup-norm bounds.
class DriftField {
 public:
  using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

  static DriftField none(int dim);
  static DriftField linear(const Eigen::MatrixXd& gradient);
  static DriftField custom(int dim, VectorFn k, ScalarFn div_k, double k_sup, double divk_sup);

  int dim() const { return dim_; }
  bool is_linear() const { return linear_; }
  const Eigen::MatrixXd& matrix() const;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  double divergence(const Eigen::VectorXd& x) const;

  double k_sup() const { return k_sup_; }
  double divk_sup() const { return divk_sup_; }

 private:
  DriftField() = default;
  int dim_ = 2;
  bool linear_ = true;
  Eigen::MatrixXd gradient_;
  VectorFn k_fn_;
  ScalarFn divk_fn_;
  double k_sup_ = 0.0;
  double divk_sup_ = 0.0;
};

/// Shift making the drift-perturbed operator coercive, with the comparison
/// rate lambda0 = 2(|k|_inf + 1) it is built from.
struct ShiftParams {
  double lambda0 = 0.0;
  double alpha = 0.0;
};

/// Weight M(x) = (1 - |x|^2)^delta; 0 on the boundary, domain error outside
/// the closed ball.
double maxwellian(const Eigen::VectorXd& x, double delta);

/// grad(M)/M = -2 delta x / (1 - |x|^2); singular at the boundary.
Eigen::VectorXd maxwellian_log_gradient(const Eigen::VectorXd& x, double delta);

/// Spring force x / (1 - (|x|/delta_tilde)^2) in unrescaled coordinates,
/// finite only inside the ball of radius delta_tilde.
Eigen::VectorXd fene_force(const Eigen::VectorXd& x_tilde, double delta_tilde);

/// Minimal admissible shift:
///   alpha = max{ k_sup/2 + 1,
///                4 lambda0^2 + lambda0 n + 2 lambda0 k_sup + divk_sup }.
/// Any larger value is also admissible.
ShiftParams minimal_shift(const DriftField& drift, int n);

/// Total weight mass Z = int_Omega M dx = omega_{n-1} * B(n/2, delta+1) / 2.
double maxwellian_mass(const FeneParams& params);

/// Index of the inverse-iteration bootstrap ladder: the unique natural
/// number in [delta/4 - 3/2, delta/4 - 1/2). Diagnostic input to the
/// spectral-radius certificate (the relevant operator power is index + 3).
/// Throws std::domain_error when the interval contains no natural number.
int bootstrap_index(double delta);

}  // namespace fene

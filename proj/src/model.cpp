#include "fene/model.hpp"

#include <cmath>

namespace fene {

void FeneParams::validate() const {
  if (n != 2 && n != 3) throw std::invalid_argument("model.n: must be 2 or 3");
  if (!(delta > 1.0)) throw std::invalid_argument("model.delta: must be > 1");
  if (!(b > 0.0)) throw std::invalid_argument("model.b: must be > 0");
  if (!(mu >= 0.0)) throw std::invalid_argument("model.mu: must be >= 0");
}

DriftField DriftField::none(int dim) {
  return linear(Eigen::MatrixXd::Zero(dim, dim));
}

DriftField DriftField::linear(const Eigen::MatrixXd& gradient) {
  if (gradient.rows() != gradient.cols()) throw std::invalid_argument("drift.matrix: must be square");
  const double scale = gradient.norm();
  if (std::abs(gradient.trace()) > 1e-12 * scale)
    throw std::invalid_argument("drift.matrix: must be traceless");
  DriftField d;
  d.dim_ = static_cast<int>(gradient.rows());
  d.linear_ = true;
  d.gradient_ = gradient;
  // sup over the unit ball of |A x| is the spectral norm, attained on the sphere
  d.k_sup_ = scale == 0.0 ? 0.0 : gradient.jacobiSvd().singularValues()(0);
  d.divk_sup_ = 0.0;
  return d;
}

DriftField DriftField::custom(int dim, VectorFn k, ScalarFn div_k, double k_sup, double divk_sup) {
  if (!k) throw std::invalid_argument("drift.k: evaluator required");
  if (!(k_sup >= 0.0) || !std::isfinite(k_sup))
    throw std::invalid_argument("drift.k_sup: must be finite and >= 0");
  if (!(divk_sup >= 0.0) || !std::isfinite(divk_sup))
    throw std::invalid_argument("drift.divk_sup: must be finite and >= 0");
  DriftField d;
  d.dim_ = dim;
  d.linear_ = false;
  d.k_fn_ = std::move(k);
  d.divk_fn_ = std::move(div_k);
  d.k_sup_ = k_sup;
  d.divk_sup_ = divk_sup;
  return d;
}

const Eigen::MatrixXd& DriftField::matrix() const {
  if (!linear_) throw std::logic_error("DriftField: custom drift has no matrix");
  return gradient_;
}

Eigen::VectorXd DriftField::operator()(const Eigen::VectorXd& x) const {
  return linear_ ? Eigen::VectorXd(gradient_ * x) : k_fn_(x);
}

double DriftField::divergence(const Eigen::VectorXd& x) const {
  if (linear_) return gradient_.trace();
  return divk_fn_ ? divk_fn_(x) : 0.0;
}

double maxwellian(const Eigen::VectorXd& x, double delta) {
  const double r2 = x.squaredNorm();
  if (r2 > 1.0 + 1e-14) throw std::domain_error("maxwellian: point outside the closed unit ball");
  return std::pow(std::max(0.0, 1.0 - r2), delta);
}

Eigen::VectorXd maxwellian_log_gradient(const Eigen::VectorXd& x, double delta) {
  const double r2 = x.squaredNorm();
  if (r2 >= 1.0) throw std::domain_error("maxwellian_log_gradient: singular at the boundary");
  return (-2.0 * delta / (1.0 - r2)) * x;
}

Eigen::VectorXd fene_force(const Eigen::VectorXd& x_tilde, double delta_tilde) {
  const double q = x_tilde.squaredNorm() / (delta_tilde * delta_tilde);
  if (q >= 1.0) throw std::domain_error("fene_force: extension at or beyond the cutoff");
  return x_tilde / (1.0 - q);
}

ShiftParams minimal_shift(const DriftField& drift, int n) {
  ShiftParams s;
  const double k = drift.k_sup();
  s.lambda0 = 2.0 * (k + 1.0);
  s.alpha = std::max(0.5 * k + 1.0,
                     4.0 * s.lambda0 * s.lambda0 + s.lambda0 * n + 2.0 * s.lambda0 * k + drift.divk_sup());
  return s;
}

double maxwellian_mass(const FeneParams& params) {
  const double n2 = 0.5 * params.n;
  // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
  const double log_omega = std::log(2.0) + n2 * std::log(M_PI) - std::lgamma(n2);
  const double log_beta = std::lgamma(n2) + std::lgamma(params.delta + 1.0) -
                          std::lgamma(n2 + params.delta + 1.0);
  return 0.5 * std::exp(log_omega + log_beta);
}

int bootstrap_index(double delta) {
  const double lo = delta / 4.0 - 1.5;
  const double hi = delta / 4.0 - 0.5;
  const int k = static_cast<int>(std::ceil(lo));
  if (k < 1 || k < lo || k >= hi)
    throw std::domain_error("bootstrap_index: no natural number in [delta/4 - 3/2, delta/4 - 1/2)");
  return k;
}

}  // namespace fene

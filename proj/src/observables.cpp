#include "fene/observables.hpp"

#include <cmath>

namespace fene {

StressTensor kramers_stress(const DistributionField& field, const FeneParams& params,
                            int quadrature_margin) {
  params.validate();
  if (!(params.delta > 1.0)) throw std::domain_error("kramers_stress: requires delta > 1");
  const double delta = field.basis.delta();

  // The spring force contributes one inverse power of (1 - r^2): the
  // integrand is 2 delta x_a x_b (1 - r^2)^{delta - 1} p(x).
  const QuadratureRule rule = build_quadrature(
      field.basis.spatial_dim(), field.basis.degree() + 2 + quadrature_margin, delta - 1.0);
  const Eigen::MatrixXd values = basis_values(field.basis, rule);
  const Eigen::ArrayXd p = (values * field.coeffs).array();

  Eigen::Matrix2d moment;
  moment(0, 0) = (rule.w * rule.x * rule.x * p).sum();
  moment(0, 1) = (rule.w * rule.x * rule.y * p).sum();
  moment(1, 0) = moment(0, 1);
  moment(1, 1) = (rule.w * rule.y * rule.y * p).sum();

  Eigen::MatrixXd s =
      params.mu * (2.0 * delta * moment - field.mass() * Eigen::Matrix2d::Identity());
  s = 0.5 * (s + s.transpose()).eval();
  return {s};
}

std::pair<double, double> ratio_bounds(const DistributionField& field, const GridSpec& grid) {
  if (grid.n_radial < 2 || grid.n_angular < 1)
    throw std::invalid_argument("ratio_bounds: degenerate grid");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> v(static_cast<size_t>(field.basis.size()));
  for (int i = 0; i < grid.n_radial; ++i) {
    const double r = static_cast<double>(i) / (grid.n_radial - 1);
    for (int k = 0; k < grid.n_angular; ++k) {
      const double theta = 2.0 * M_PI * k / grid.n_angular;
      field.basis.evaluate(r, theta, v);
      double acc = 0.0;
      for (int j = 0; j < field.basis.size(); ++j) acc += v[static_cast<size_t>(j)] * field.coeffs[j];
      lo = std::min(lo, acc);
      hi = std::max(hi, acc);
    }
  }
  return {lo, hi};
}

double weighted_sup_norm(const DistributionField& field, double beta, const GridSpec& grid,
                         bool* overflow) {
  if (!(beta >= 0.0)) throw std::invalid_argument("weighted_sup_norm: beta must be >= 0");
  if (overflow) *overflow = false;
  const double delta = field.basis.delta();
  double sup = 0.0;
  std::vector<double> v(static_cast<size_t>(field.basis.size()));
  for (int i = 0; i < grid.n_radial; ++i) {
    const double r = static_cast<double>(i) / (grid.n_radial - 1);
    const double m = std::max(0.0, 1.0 - r * r);
    for (int k = 0; k < grid.n_angular; ++k) {
      const double theta = 2.0 * M_PI * k / grid.n_angular;
      field.basis.evaluate(r, theta, v);
      double ratio = 0.0;
      for (int j = 0; j < field.basis.size(); ++j)
        ratio += v[static_cast<size_t>(j)] * field.coeffs[j];
      double value;
      if (m == 0.0) {
        if (beta < 1.0) {
          value = 0.0;
        } else if (beta == 1.0) {
          value = std::abs(ratio);
        } else {
          if (std::abs(ratio) > 0.0) {
            if (overflow) *overflow = true;
            return std::numeric_limits<double>::infinity();
          }
          value = 0.0;
        }
      } else {
        value = std::abs(ratio) * std::pow(m, delta * (1.0 - beta));
      }
      sup = std::max(sup, value);
    }
  }
  return sup;
}

Eigen::VectorXd MacroscopicFlow::velocity(const Eigen::VectorXd& y) const {
  return velocity_gradient * y + velocity_offset;
}

double MacroscopicFlow::pressure(const Eigen::VectorXd& y) const {
  return -0.5 * y.dot(pressure_quadratic * y) - pressure_linear.dot(y);
}

MacroscopicFlow macroscopic_flow(const Eigen::MatrixXd& gradient, const Eigen::VectorXd& offset) {
  if (gradient.rows() != gradient.cols())
    throw std::invalid_argument("macroscopic_flow: gradient must be square");
  if (offset.size() != gradient.rows())
    throw std::invalid_argument("macroscopic_flow: offset dimension mismatch");
  if (std::abs(gradient.trace()) > 1e-12 * std::max(1.0, gradient.norm()))
    throw std::invalid_argument("macroscopic_flow: gradient must be traceless");

  MacroscopicFlow flow;
  flow.velocity_gradient = gradient;
  flow.velocity_offset = offset;
  const Eigen::MatrixXd sq = gradient * gradient;
  flow.pressure_quadratic = 0.5 * (sq + sq.transpose());
  flow.pressure_linear = gradient * offset;
  flow.divergence = gradient.trace();
  flow.momentum_residual = (sq - flow.pressure_quadratic).norm();
  return flow;
}

}  // namespace fene

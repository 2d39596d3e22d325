#pragma once

#include <Eigen/Dense>
#include <utility>

#include "fene/basis.hpp"
#include "fene/eigensolver.hpp"
#include "fene/model.hpp"

namespace fene {

/// Polymeric extra stress in rescaled unit-ball variables:
///   S = mu * [ 2 delta int x (x) x / (1 - |x|^2) psi dx - (int psi) I ].
/// The 2 delta factor makes the equilibrium stress vanish identically.
struct StressTensor {
  Eigen::MatrixXd components;
};

/// Viscometric reductions of the stress under a simple shear drift.
struct MaterialFunctions {
  double eta_p = 0.0;  // S12 / wi
  double psi1 = 0.0;   // (S11 - S22) / wi^2
  double psi2 = std::numeric_limits<double>::quiet_NaN();  // n = 3 only
};

StressTensor kramers_stress(const DistributionField& field, const FeneParams& params,
                            int quadrature_margin = 4);

/// Min and max of the polynomial part psi / M over a polar grid that
/// includes the boundary ring.
std::pair<double, double> ratio_bounds(const DistributionField& field, const GridSpec& grid = {});

/// sup over the grid of |psi| / M^beta. For beta > 1 the boundary value is
/// infinite whenever the boundary ratio does not vanish; that case returns
/// +inf and sets *overflow.
double weighted_sup_norm(const DistributionField& field, double beta, const GridSpec& grid = {},
                         bool* overflow = nullptr);

/// Steady homogeneous flow closure for a traceless velocity gradient:
/// u(y) = A y + c and p(y) = -1/2 y^T sym(A^2) y - (A c) . y, which solves
/// the steady momentum balance exactly when A^2 is symmetric (always true
/// for traceless 2x2). momentum_residual reports |A^2 - sym(A^2)|.
struct MacroscopicFlow {
  Eigen::MatrixXd velocity_gradient;
  Eigen::VectorXd velocity_offset;
  Eigen::MatrixXd pressure_quadratic;  // p = -1/2 y^T Q y - g . y
  Eigen::VectorXd pressure_linear;
  double divergence = 0.0;
  double momentum_residual = 0.0;

  Eigen::VectorXd velocity(const Eigen::VectorXd& y) const;
  double pressure(const Eigen::VectorXd& y) const;
};

MacroscopicFlow macroscopic_flow(const Eigen::MatrixXd& gradient, const Eigen::VectorXd& offset);

}  // namespace fene

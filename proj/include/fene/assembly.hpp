#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "fene/basis.hpp"
#include "fene/model.hpp"

namespace fene {

/// Galerkin matrices of the weak form over the weighted basis. Test index is
/// the row, trial index the column:
///   stiffness S_ij = int M grad(p_j) . grad(p_i) dx
///   drift     D_ij = - int M p_j (k . grad(p_i)) dx
///   mass      N_ij = int M p_i p_j dx
///   shifted   A    = S + D + alpha N
/// The row belonging to the constant test polynomial vanishes identically in
/// S + D, so the pencil (S + D) c = lambda N c carries an exact zero
/// eigenvalue.
struct OperatorMatrices {
  BasisSpec spec;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd drift;
  Eigen::MatrixXd mass;
  Eigen::MatrixXd shifted;
  double alpha = 0.0;
  int quadrature_degree = 0;
  double condition_estimate = 0.0;
  bool conditioning_warning = false;
  /// Relative change of the drift block under a finer rule; zero for linear
  /// drifts (which are integrated exactly), nonzero surfaces the quadrature
  /// error committed for non-polynomial drifts.
  double drift_quadrature_residual = 0.0;
};

OperatorMatrices assemble(const BasisSpec& spec, const DriftField& drift, double alpha,
                          int quadrature_margin = 0);

/// (S + D) c : the pairing of the unshifted operator with every test function.
Eigen::VectorXd apply_operator(const OperatorMatrices& mats, const Eigen::VectorXd& coeffs);

/// phi^T (S + D + alpha N) u.
double bilinear_form(const OperatorMatrices& mats, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& phi);

/// Matrix Market coordinate dump (dense matrices written entrywise).
void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& matrix);

}  // namespace fene

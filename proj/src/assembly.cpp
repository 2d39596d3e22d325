#include "fene/assembly.hpp"

#include <cmath>
#include <ostream>

namespace fene {

namespace {

Eigen::MatrixXd drift_block(const DriftField& drift, const QuadratureRule& rule,
                            const Eigen::MatrixXd& values, const Eigen::MatrixXd& grad_x,
                            const Eigen::MatrixXd& grad_y) {
  Eigen::ArrayXd kx(rule.size()), ky(rule.size());
  if (drift.is_linear()) {
    const auto& A = drift.matrix();
    kx = A(0, 0) * rule.x + A(0, 1) * rule.y;
    ky = A(1, 0) * rule.x + A(1, 1) * rule.y;
  } else {
    Eigen::VectorXd p(2);
    for (int q = 0; q < rule.size(); ++q) {
      p << rule.x[q], rule.y[q];
      const Eigen::VectorXd k = drift(p);
      kx[q] = k[0];
      ky[q] = k[1];
    }
  }
  // D_ij = - sum_q w_q (k . grad p_i) p_j
  Eigen::MatrixXd kgrad = kx.matrix().asDiagonal() * grad_x + ky.matrix().asDiagonal() * grad_y;
  return -(kgrad.transpose() * rule.w.matrix().asDiagonal() * values);
}

// Two-norm condition estimate by power iteration on A^T A and on the inverse.
double condition_estimate(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::PartialPivLU<Eigen::MatrixXd> lut(A.transpose());
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 1.0, 2.0).normalized();
  Eigen::VectorXd u = v;
  double top = 0.0, bottom_inv = 0.0;
  for (int it = 0; it < 30; ++it) {
    v = A.transpose() * (A * v);
    top = std::sqrt(v.norm());
    v.normalize();
    u = lut.solve(lu.solve(u));
    bottom_inv = std::sqrt(u.norm());
    u.normalize();
  }
  return top * bottom_inv;
}

}  // namespace

OperatorMatrices assemble(const BasisSpec& spec, const DriftField& drift, double alpha,
                          int quadrature_margin) {
  if (drift.dim() != spec.spatial_dim())
    throw std::invalid_argument("assemble: drift dimension does not match the basis");
  if (quadrature_margin < 0) throw std::invalid_argument("assemble: negative quadrature margin");

  const int degree = 2 * spec.degree() + 4 + quadrature_margin;
  const QuadratureRule rule = build_quadrature(spec.spatial_dim(), degree, spec.delta());

  Eigen::MatrixXd values, grad_x, grad_y;
  basis_tables(spec, rule, values, grad_x, grad_y);
  const Eigen::MatrixXd wv = rule.w.matrix().asDiagonal() * values;
  const Eigen::MatrixXd wgx = rule.w.matrix().asDiagonal() * grad_x;
  const Eigen::MatrixXd wgy = rule.w.matrix().asDiagonal() * grad_y;

  OperatorMatrices mats;
  mats.spec = spec;
  mats.alpha = alpha;
  mats.quadrature_degree = degree;
  mats.stiffness = grad_x.transpose() * wgx + grad_y.transpose() * wgy;
  mats.stiffness = 0.5 * (mats.stiffness + mats.stiffness.transpose()).eval();
  mats.mass = values.transpose() * wv;
  mats.mass = 0.5 * (mats.mass + mats.mass.transpose()).eval();
  mats.drift = drift_block(drift, rule, values, grad_x, grad_y);
  mats.shifted = mats.stiffness + mats.drift + alpha * mats.mass;

  if (!drift.is_linear() && drift.k_sup() > 0.0) {
    const QuadratureRule finer = build_quadrature(spec.spatial_dim(), degree + 10, spec.delta());
    Eigen::MatrixXd fv, fgx, fgy;
    basis_tables(spec, finer, fv, fgx, fgy);
    const Eigen::MatrixXd refined = drift_block(drift, finer, fv, fgx, fgy);
    const double scale = std::max(refined.norm(), 1e-300);
    mats.drift_quadrature_residual = (refined - mats.drift).norm() / scale;
  }

  mats.condition_estimate = condition_estimate(mats.shifted);
  mats.conditioning_warning = mats.condition_estimate > 1e12;
  return mats;
}

Eigen::VectorXd apply_operator(const OperatorMatrices& mats, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != mats.stiffness.rows())
    throw std::invalid_argument("apply_operator: dimension mismatch");
  return mats.stiffness * coeffs + mats.drift * coeffs;
}

double bilinear_form(const OperatorMatrices& mats, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& phi) {
  if (u.size() != mats.shifted.cols() || phi.size() != mats.shifted.rows())
    throw std::invalid_argument("bilinear_form: dimension mismatch");
  return phi.dot(mats.shifted * u);
}

void write_matrix_market(std::ostream& os, const Eigen::MatrixXd& matrix) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < matrix.cols(); ++j)
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
      if (matrix(i, j) != 0.0) ++nnz;
  os << matrix.rows() << " " << matrix.cols() << " " << nnz << "\n";
  char buf[64];
  for (Eigen::Index j = 0; j < matrix.cols(); ++j)
    for (Eigen::Index i = 0; i < matrix.rows(); ++i)
      if (matrix(i, j) != 0.0) {
        std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n", static_cast<long long>(i + 1),
                      static_cast<long long>(j + 1), matrix(i, j));
        os << buf;
      }
}

}  // namespace fene

#include "fene/jacobi.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fene {

void jacobi_sequence(int nmax, double a, double b, double t, std::span<double> out) {
  if (nmax < 0) throw std::invalid_argument("jacobi_sequence: nmax < 0");
  if (a <= -1.0 || b <= -1.0) throw std::invalid_argument("jacobi_sequence: parameters must exceed -1");
  out[0] = 1.0;
  if (nmax == 0) return;
  out[1] = 0.5 * (a + b + 2.0) * t + 0.5 * (a - b);
  for (int n = 2; n <= nmax; ++n) {
    const double s = 2.0 * n + a + b;
    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (a * a - b * b);
    const double c3 = (s - 2.0) * (s - 1.0) * s;
    const double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    out[n] = ((c2 + c3 * t) * out[n - 1] - c4 * out[n - 2]) / c1;
  }
}

double jacobi(int n, double a, double b, double t) {
  std::vector<double> buf(static_cast<size_t>(n) + 1);
  jacobi_sequence(n, a, b, t, buf);
  return buf[static_cast<size_t>(n)];
}

double jacobi_derivative(int n, double a, double b, double t) {
  if (n == 0) return 0.0;
  return 0.5 * (n + a + b + 1.0) * jacobi(n - 1, a + 1.0, b + 1.0, t);
}

double jacobi_squared_norm(int n, double a, double b) {
  const double logval = (a + b + 1.0) * std::log(2.0) - std::log(2.0 * n + a + b + 1.0) +
                        std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) -
                        std::lgamma(n + a + b + 1.0) - std::lgamma(n + 1.0);
  return std::exp(logval);
}

GaussJacobiRule gauss_jacobi(int npoints, double a, double b) {
  if (npoints < 1) throw std::invalid_argument("gauss_jacobi: need at least one point");
  if (a <= -1.0 || b <= -1.0) throw std::invalid_argument("gauss_jacobi: parameters must exceed -1");

  // Recurrence coefficients of the monic orthogonal polynomials for the
  // weight (1-t)^a (1+t)^b (Gautschi's convention):
  //   p_{k+1} = (t - alpha_k) p_k - beta_k p_{k-1}
  const double mu0 =
      std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
               std::lgamma(a + b + 2.0));
  Eigen::VectorXd diag(npoints), sub(npoints > 1 ? npoints - 1 : 0);
  diag[0] = (b - a) / (a + b + 2.0);
  for (int k = 1; k < npoints; ++k) {
    const double s = 2.0 * k + a + b;
    diag[k] = (b * b - a * a) / (s * (s + 2.0));
    const double beta =
        4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    sub[k - 1] = std::sqrt(beta);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi: tridiagonal eigensolve failed");

  GaussJacobiRule rule;
  rule.points = es.eigenvalues();
  rule.weights = mu0 * es.eigenvectors().row(0).array().square().matrix();
  return rule;
}

}  // namespace fene

#pragma once

#include <Eigen/Dense>
#include <span>

namespace fene {

/// Jacobi polynomial P_n^{(a,b)}(t) on [-1,1]; a, b real > -1.
double jacobi(int n, double a, double b, double t);

/// d/dt P_n^{(a,b)}(t).
double jacobi_derivative(int n, double a, double b, double t);

/// Fills out[0..nmax] with P_0..P_nmax at t via the three-term recurrence.
void jacobi_sequence(int nmax, double a, double b, double t, std::span<double> out);

/// L2 norm squared of P_n^{(a,b)} under the weight (1-t)^a (1+t)^b.
double jacobi_squared_norm(int n, double a, double b);

struct GaussJacobiRule {
  Eigen::VectorXd points;   // ascending in (-1,1)
  Eigen::VectorXd weights;  // all positive
};

/// Gauss-Jacobi rule: integrates (1-t)^a (1+t)^b q(t) exactly for
/// polynomials q of degree <= 2*npoints - 1. Golub-Welsch via the
/// symmetric tridiagonal Jacobi matrix.
GaussJacobiRule gauss_jacobi(int npoints, double a, double b);

}  // namespace fene

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "fene/model.hpp"

namespace fene {

struct BasisIndex {
  int radial = 0;   // Jacobi degree j
  int mode = 0;     // angular mode m
  bool sine = false;
  int total_degree() const { return 2 * radial + mode; }
};

/// Trial space {M * p : p polynomial of total degree <= N} on the unit disk.
///
/// The polynomial factors are the disk polynomials
///   p_{j,m}(r,th) = r^m P_j^{(delta,m)}(2r^2 - 1) {cos,sin}(m th),
/// scaled to unit norm under the inner product int_Omega M p q dx, so the
/// analytic Gram matrix is the identity. Index 0 is the constant.
class BasisSpec {
 public:
  BasisSpec() = default;

  int spatial_dim() const { return n_; }
  int degree() const { return degree_; }
  double delta() const { return delta_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<BasisIndex>& indices() const { return indices_; }
  double normalizer(int i) const { return scale_[static_cast<size_t>(i)]; }

  /// sqrt(Z) with Z = int M dx: the mass of a field is mass_factor() * coeffs[0].
  double mass_factor() const { return mass_factor_; }

  /// All basis polynomial values at one polar point (works for any r >= 0,
  /// including the origin and the boundary).
  void evaluate(double r, double theta, std::span<double> values) const;

  /// Values plus Cartesian gradients of the polynomial factors.
  void evaluate_with_gradient(double r, double theta, std::span<double> values,
                              std::span<double> grad_x, std::span<double> grad_y) const;

  friend BasisSpec build_basis(int n, int degree, double delta);

 private:
  struct ModeBlock {
    int mode = 0;
    std::vector<int> cos_index;  // flat index per radial degree j
    std::vector<int> sin_index;  // -1 entries for m = 0
  };

  int n_ = 2;
  int degree_ = 0;
  double delta_ = 0.0;
  double mass_factor_ = 0.0;
  std::vector<BasisIndex> indices_;
  std::vector<double> scale_;
  std::vector<ModeBlock> blocks_;
};

BasisSpec build_basis(int n, int degree, double delta);

/// Nodes/weights integrating f -> int_Omega (1-|x|^2)^gamma q(x) dx exactly
/// for polynomials q up to exactness_degree. Tensor product of Gauss-Jacobi
/// in t = 2r^2 - 1 with equispaced angles; nodes strictly interior, weights
/// positive.
struct QuadratureRule {
  Eigen::ArrayXd r, theta;  // polar coordinates per node
  Eigen::ArrayXd x, y;      // Cartesian coordinates
  Eigen::ArrayXd w;
  double weight_exponent = 0.0;
  int exactness_degree = 0;
  int size() const { return static_cast<int>(w.size()); }
};

QuadratureRule build_quadrature(int n, int exactness_degree, double weight_exponent);

/// psi = M * p represented by the coefficients of p in a BasisSpec.
struct DistributionField {
  BasisSpec basis;
  Eigen::VectorXd coeffs;

  double ratio_at(double r, double theta) const;  // p = psi / M, polynomial
  double value_at(double r, double theta) const;  // psi, zero at r = 1
  double mass() const { return basis.mass_factor() * coeffs[0]; }
};

struct FieldSample {
  double psi = 0.0;
  double ratio = 0.0;
};

std::vector<FieldSample> evaluate_field(const DistributionField& field,
                                        std::span<const double> r,
                                        std::span<const double> theta);

/// Matrix of basis values at the rule's nodes, nodes x size; optionally the
/// Cartesian gradient tables too.
Eigen::MatrixXd basis_values(const BasisSpec& spec, const QuadratureRule& rule);
void basis_tables(const BasisSpec& spec, const QuadratureRule& rule, Eigen::MatrixXd& values,
                  Eigen::MatrixXd& grad_x, Eigen::MatrixXd& grad_y);

/// Coefficients of a polynomial q(x,y) given by an evaluator: c_i =
/// int M q p_i dx. Exact when the rule has weight exponent delta and enough
/// exactness for deg(q) + degree.
Eigen::VectorXd project(const BasisSpec& spec, const QuadratureRule& rule,
                        const std::function<double(double, double)>& q);

/// Equilibrium state psi = b M / Z as a field on the given basis.
DistributionField equilibrium_field(const FeneParams& params, const BasisSpec& spec);

}  // namespace fene

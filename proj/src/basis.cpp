#include "fene/basis.hpp"

#include <cmath>

#include "fene/jacobi.hpp"

namespace fene {

namespace {

// int_Omega M p_{j,m}^2 dx for the unscaled disk polynomial; reduces to a
// Jacobi norm after t = 2r^2 - 1.
double disk_poly_norm(int j, int m, double delta) {
  const double angular = (m == 0) ? 2.0 * M_PI : M_PI;
  const double logval = std::lgamma(j + delta + 1.0) + std::lgamma(j + m + 1.0) -
                        std::lgamma(j + delta + m + 1.0) - std::lgamma(j + 1.0) -
                        std::log(2.0 * j + delta + m + 1.0);
  return 0.5 * angular * std::exp(logval);
}

}  // namespace

BasisSpec build_basis(int n, int degree, double delta) {
  if (n != 2) throw std::invalid_argument("build_basis: unsupported dimension (only n = 2)");
  if (degree < 0) throw std::invalid_argument("build_basis: degree must be >= 0");
  if (!(delta > 1.0)) throw std::invalid_argument("build_basis: delta must be > 1");

  BasisSpec spec;
  spec.n_ = n;
  spec.degree_ = degree;
  spec.delta_ = delta;
  spec.blocks_.resize(static_cast<size_t>(degree) + 1);
  for (int m = 0; m <= degree; ++m) {
    auto& blk = spec.blocks_[static_cast<size_t>(m)];
    blk.mode = m;
    const int jmax = (degree - m) / 2;
    blk.cos_index.assign(static_cast<size_t>(jmax) + 1, -1);
    blk.sin_index.assign(static_cast<size_t>(jmax) + 1, -1);
  }

  // Ordered by total degree, then by mode; cosine before sine.
  for (int d = 0; d <= degree; ++d) {
    for (int m = d % 2; m <= d; m += 2) {
      const int j = (d - m) / 2;
      auto& blk = spec.blocks_[static_cast<size_t>(m)];
      const double scale = 1.0 / std::sqrt(disk_poly_norm(j, m, delta));
      blk.cos_index[static_cast<size_t>(j)] = spec.size();
      spec.indices_.push_back({j, m, false});
      spec.scale_.push_back(scale);
      if (m > 0) {
        blk.sin_index[static_cast<size_t>(j)] = spec.size();
        spec.indices_.push_back({j, m, true});
        spec.scale_.push_back(scale);
      }
    }
  }
  spec.mass_factor_ = std::sqrt(disk_poly_norm(0, 0, delta));
  return spec;
}

void BasisSpec::evaluate(double r, double theta, std::span<double> values) const {
  const double t = 2.0 * r * r - 1.0;
  std::vector<double> pj(static_cast<size_t>(degree_ / 2) + 1);
  double rm = 1.0;
  for (int m = 0; m <= degree_; ++m) {
    const auto& blk = blocks_[static_cast<size_t>(m)];
    const int jmax = static_cast<int>(blk.cos_index.size()) - 1;
    if (jmax < 0) break;
    jacobi_sequence(jmax, delta_, m, t, pj);
    const double c = std::cos(m * theta);
    const double s = std::sin(m * theta);
    for (int j = 0; j <= jmax; ++j) {
      const double v = rm * pj[static_cast<size_t>(j)];
      const int ic = blk.cos_index[static_cast<size_t>(j)];
      values[static_cast<size_t>(ic)] = scale_[static_cast<size_t>(ic)] * v * c;
      const int is = blk.sin_index[static_cast<size_t>(j)];
      if (is >= 0) values[static_cast<size_t>(is)] = scale_[static_cast<size_t>(is)] * v * s;
    }
    rm *= r;
  }
}

void BasisSpec::evaluate_with_gradient(double r, double theta, std::span<double> values,
                                       std::span<double> grad_x, std::span<double> grad_y) const {
  const double t = 2.0 * r * r - 1.0;
  const double ct = std::cos(theta), st = std::sin(theta);
  const size_t nj = static_cast<size_t>(degree_ / 2) + 1;
  std::vector<double> pj(nj), dpj(nj);
  double rm = 1.0;   // r^m
  double rm1 = 0.0;  // r^{m-1}, defined for m >= 1
  for (int m = 0; m <= degree_; ++m) {
    const auto& blk = blocks_[static_cast<size_t>(m)];
    const int jmax = static_cast<int>(blk.cos_index.size()) - 1;
    if (jmax < 0) break;
    jacobi_sequence(jmax, delta_, m, t, pj);
    // dP_j/dt = (j + a + b + 1)/2 * P_{j-1}^{(a+1, b+1)}
    dpj[0] = 0.0;
    if (jmax >= 1) {
      jacobi_sequence(jmax - 1, delta_ + 1.0, m + 1.0, t, std::span<double>(dpj).subspan(1));
      for (int j = 1; j <= jmax; ++j) dpj[static_cast<size_t>(j)] *= 0.5 * (j + delta_ + m + 1.0);
    }
    const double cm = std::cos(m * theta);
    const double sm = std::sin(m * theta);
    for (int j = 0; j <= jmax; ++j) {
      const double P = pj[static_cast<size_t>(j)];
      const double dP = dpj[static_cast<size_t>(j)];
      const double radial = rm * P;
      // d/dr [r^m P(2r^2-1)] and r^{m-1} P (the 1/r angular factor)
      const double dradial = (m >= 1 ? m * rm1 * P : 0.0) + 4.0 * rm * r * dP;
      const double over_r = (m >= 1 ? rm1 * P : 0.0);
      const int ic = blk.cos_index[static_cast<size_t>(j)];
      const double sc = scale_[static_cast<size_t>(ic)];
      values[static_cast<size_t>(ic)] = sc * radial * cm;
      grad_x[static_cast<size_t>(ic)] = sc * (ct * dradial * cm - st * over_r * (-m * sm));
      grad_y[static_cast<size_t>(ic)] = sc * (st * dradial * cm + ct * over_r * (-m * sm));
      const int is = blk.sin_index[static_cast<size_t>(j)];
      if (is >= 0) {
        values[static_cast<size_t>(is)] = sc * radial * sm;
        grad_x[static_cast<size_t>(is)] = sc * (ct * dradial * sm - st * over_r * (m * cm));
        grad_y[static_cast<size_t>(is)] = sc * (st * dradial * sm + ct * over_r * (m * cm));
      }
    }
    rm1 = rm;  // r^{(m+1)-1}
    rm *= r;
  }
}

QuadratureRule build_quadrature(int n, int exactness_degree, double weight_exponent) {
  if (n != 2) throw std::invalid_argument("build_quadrature: unsupported dimension (only n = 2)");
  if (exactness_degree < 0) throw std::invalid_argument("build_quadrature: degree must be >= 0");
  if (!(weight_exponent > -1.0))
    throw std::invalid_argument("build_quadrature: weight exponent must exceed -1");

  // After angular averaging the radial integrand is a polynomial in
  // t = 2r^2 - 1 of degree <= floor(d/2); one extra point for margin.
  const int nr = (exactness_degree / 2 + 1 + 1) / 2 + 1;
  const int nt = exactness_degree + 1;
  const auto gj = gauss_jacobi(nr, weight_exponent, 0.0);

  QuadratureRule rule;
  rule.weight_exponent = weight_exponent;
  rule.exactness_degree = exactness_degree;
  const int total = nr * nt;
  rule.r.resize(total);
  rule.theta.resize(total);
  rule.x.resize(total);
  rule.y.resize(total);
  rule.w.resize(total);
  const double wscale = (2.0 * M_PI / nt) / (4.0 * std::pow(2.0, weight_exponent));
  int q = 0;
  for (int k = 0; k < nr; ++k) {
    const double rk = std::sqrt(0.5 * (1.0 + gj.points[k]));
    const double wk = wscale * gj.weights[k];
    for (int i = 0; i < nt; ++i, ++q) {
      const double th = 2.0 * M_PI * i / nt;
      rule.r[q] = rk;
      rule.theta[q] = th;
      rule.x[q] = rk * std::cos(th);
      rule.y[q] = rk * std::sin(th);
      rule.w[q] = wk;
    }
  }
  return rule;
}

double DistributionField::ratio_at(double r, double theta) const {
  std::vector<double> v(static_cast<size_t>(basis.size()));
  basis.evaluate(r, theta, v);
  double acc = 0.0;
  for (int i = 0; i < basis.size(); ++i) acc += v[static_cast<size_t>(i)] * coeffs[i];
  return acc;
}

double DistributionField::value_at(double r, double theta) const {
  const double m = std::pow(std::max(0.0, 1.0 - r * r), basis.delta());
  return m * ratio_at(r, theta);
}

std::vector<FieldSample> evaluate_field(const DistributionField& field, std::span<const double> r,
                                        std::span<const double> theta) {
  if (r.size() != theta.size()) throw std::invalid_argument("evaluate_field: size mismatch");
  std::vector<FieldSample> out(r.size());
  std::vector<double> v(static_cast<size_t>(field.basis.size()));
  for (size_t q = 0; q < r.size(); ++q) {
    field.basis.evaluate(r[q], theta[q], v);
    double acc = 0.0;
    for (int i = 0; i < field.basis.size(); ++i) acc += v[static_cast<size_t>(i)] * field.coeffs[i];
    const double m = std::pow(std::max(0.0, 1.0 - r[q] * r[q]), field.basis.delta());
    out[q] = {m * acc, acc};
  }
  return out;
}

Eigen::MatrixXd basis_values(const BasisSpec& spec, const QuadratureRule& rule) {
  Eigen::MatrixXd values(rule.size(), spec.size());
  std::vector<double> buf(static_cast<size_t>(spec.size()));
  for (int q = 0; q < rule.size(); ++q) {
    spec.evaluate(rule.r[q], rule.theta[q], buf);
    for (int i = 0; i < spec.size(); ++i) values(q, i) = buf[static_cast<size_t>(i)];
  }
  return values;
}

void basis_tables(const BasisSpec& spec, const QuadratureRule& rule, Eigen::MatrixXd& values,
                  Eigen::MatrixXd& grad_x, Eigen::MatrixXd& grad_y) {
  values.resize(rule.size(), spec.size());
  grad_x.resize(rule.size(), spec.size());
  grad_y.resize(rule.size(), spec.size());
  std::vector<double> v(static_cast<size_t>(spec.size()));
  std::vector<double> gx(static_cast<size_t>(spec.size()));
  std::vector<double> gy(static_cast<size_t>(spec.size()));
  for (int q = 0; q < rule.size(); ++q) {
    spec.evaluate_with_gradient(rule.r[q], rule.theta[q], v, gx, gy);
    for (int i = 0; i < spec.size(); ++i) {
      values(q, i) = v[static_cast<size_t>(i)];
      grad_x(q, i) = gx[static_cast<size_t>(i)];
      grad_y(q, i) = gy[static_cast<size_t>(i)];
    }
  }
}

Eigen::VectorXd project(const BasisSpec& spec, const QuadratureRule& rule,
                        const std::function<double(double, double)>& q) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(spec.size());
  std::vector<double> v(static_cast<size_t>(spec.size()));
  for (int k = 0; k < rule.size(); ++k) {
    spec.evaluate(rule.r[k], rule.theta[k], v);
    const double f = rule.w[k] * q(rule.x[k], rule.y[k]);
    for (int i = 0; i < spec.size(); ++i) c[i] += f * v[static_cast<size_t>(i)];
  }
  return c;
}

DistributionField equilibrium_field(const FeneParams& params, const BasisSpec& spec) {
  params.validate();
  DistributionField field{spec, Eigen::VectorXd::Zero(spec.size())};
  field.coeffs[0] = params.b / spec.mass_factor();
  return field;
}

}  // namespace fene

#include "fene/pipeline.hpp"

namespace fene {

SolveOutcome solve_steady_state(const FeneParams& params, const DriftField& drift,
                                const SolveOptions& options) {
  params.validate();
  SolveOutcome out;
  out.shift = minimal_shift(drift, params.n);
  const double alpha = options.alpha_override.value_or(out.shift.alpha);
  const BasisSpec spec = build_basis(params.n, options.degree, params.delta);
  out.mats = assemble(spec, drift, alpha, options.quadrature_margin);
  auto [field, report] = principal_eigenpair(out.mats, params.b, options.solver, options.grid);
  out.field = std::move(field);
  out.report = report;
  out.stress = kramers_stress(out.field, params);
  return out;
}

MaterialFunctions material_functions(const FeneParams& params, const Eigen::MatrixXd& base_gradient,
                                     double wi, const SolveOptions& options,
                                     StressTensor* stress_out) {
  if (!(wi > 0.0)) throw std::invalid_argument("material_functions: wi must be > 0");
  const DriftField drift = DriftField::linear(wi * base_gradient);
  const SolveOutcome outcome = solve_steady_state(params, drift, options);
  const auto& s = outcome.stress.components;

  MaterialFunctions mf;
  mf.eta_p = s(0, 1) / wi;
  mf.psi1 = (s(0, 0) - s(1, 1)) / (wi * wi);
  if (params.n == 3 && s.rows() == 3) mf.psi2 = (s(1, 1) - s(2, 2)) / (wi * wi);
  if (stress_out) *stress_out = outcome.stress;
  return mf;
}

}  // namespace fene

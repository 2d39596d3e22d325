#pragma once

#include <optional>

#include "fene/assembly.hpp"
#include "fene/eigensolver.hpp"
#include "fene/observables.hpp"

namespace fene {

struct SolveOptions {
  int degree = 16;
  int quadrature_margin = 0;
  SolverConfig solver{};
  /// Overrides the minimal shift; any value keeping the shifted matrix
  /// invertible works for the zero-eigenvalue computation.
  std::optional<double> alpha_override{};
  GridSpec grid{};
};

struct SolveOutcome {
  ShiftParams shift;
  OperatorMatrices mats;
  DistributionField field;
  EigenReport report;
  StressTensor stress;
};

/// Full steady-state pipeline: shift, assembly, principal eigenpair,
/// stress.
SolveOutcome solve_steady_state(const FeneParams& params, const DriftField& drift,
                                const SolveOptions& options);

/// Solves at k = wi * base_gradient * x and reduces the stress to the
/// viscometric functions.
MaterialFunctions material_functions(const FeneParams& params, const Eigen::MatrixXd& base_gradient,
                                     double wi, const SolveOptions& options,
                                     StressTensor* stress_out = nullptr);

}  // namespace fene

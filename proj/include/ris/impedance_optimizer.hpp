// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "ris/power_analysis.hpp"
#include "ris/sheet_model.hpp"

namespace ris {

enum class ObjectiveKind { GlobalFlow, FluxMatch };

struct MaskSector {
  double theta_l = 0;  // rad
  double theta_u = 0;
  double step = 0;
  double delta = 1e-4;  // W/m^2

  std::vector<double> angles() const;
};

// Default specular sector: [0, 1] deg, step 0.1 deg, delta 1e-4.
MaskSector specular_mask();

struct SolverSettings {
  int max_outer = 60;
  int max_inner = 3000;
  int lbfgs_memory = 10;
  double mu0 = 1e-4;
  double mu_growth = 3.0;
  double feas_tol = 1e-3;     // on the normalized constraint c = g/bound - 1
  int min_outer = 4;
  double merit_rel_tol = 1e-10;
  int stall_outer = 5;
  double grad_tol = 1e-12;
  double ftol = 1e-15;
};

struct DesignProblem {
  ObjectiveKind objective = ObjectiveKind::GlobalFlow;
  std::optional<SurfaceProfile> reference;  // required by FluxMatch
  std::optional<double> epsilon = 5e-2;     // nullopt: Helmholtz bound inactive
  bool reactive = false;
  std::vector<MaskSector> masks;
  SurfaceProfile init;
  SolverSettings solver;
  SineFactor sine = SineFactor::ThetaR;
};

struct ConstraintReport {
  std::vector<double> helmholtz;
  std::vector<double> mask_angles;
  std::vector<double> mask_flux;
  std::vector<double> mask_delta;
  double reactivity = 0;  // max |Re Z_n|

  double max_helmholtz() const;
  // max over samples of flux/delta - 1, or -inf without masks
  double max_mask_violation() const;
};

struct SolveReport {
  SurfaceProfile profile;
  std::vector<double> objective_trace;
  double objective = 0;
  double max_helmholtz = 0;
  double max_mask_violation = 0;
  int iterations = 0;
  int outer_iterations = 0;
  double wall_time = 0;
  bool converged = false;
};

ConstraintReport evaluate_constraints(const SurfaceProfile& p, const DesignProblem& prob,
                                      const ScenarioGeometry& geom, const WaveEnvironment& env);

SolveReport solve_global(const DesignProblem& prob, const ScenarioGeometry& geom,
                         const WaveEnvironment& env);
SolveReport solve_reactive(const DesignProblem& prob, const ScenarioGeometry& geom,
                           const WaveEnvironment& env);
// Dispatches on prob.objective / prob.reactive.
SolveReport solve(const DesignProblem& prob, const ScenarioGeometry& geom, const WaveEnvironment& env);

// Re(Z) set to zero without re-optimizing.
SurfaceProfile zero_real_part(const SurfaceProfile& p);

// Analytic gradients with respect to (Re Z_n, Im Z_n), packed as d/dRe + j d/dIm.
std::vector<cplx> global_flow_gradient(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                       const WaveEnvironment& env);
std::vector<cplx> flux_gradient(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                const WaveEnvironment& env, double theta_o);
// Gradient of sum_n w_n H_n.
std::vector<cplx> helmholtz_gradient(const SurfaceProfile& p, const ScenarioGeometry& geom,
                                     const WaveEnvironment& env, const std::vector<double>& w,
                                     SineFactor s = SineFactor::ThetaR);

}  // namespace ris

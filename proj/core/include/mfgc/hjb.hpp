#pragma once

// Backward viscous HJB solver for a frozen density trajectory:
//   -u_t - nu Lap u + H(T_{1/eps} m, Du) = F^eps(m),   u(T) = G^eps(m(T)),
// implicit Euler in time, one Newton solve per level on the upwind scheme.

#include <vector>

#include "mfgc/grid.hpp"
#include "mfgc/model.hpp"
#include "mfgc/transport.hpp"

namespace mfgc {

struct HJBOptions {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  /// Truncation / mollification width; 0 disables both.
  double epsilon = 0.0;
  /// Tolerance of the iterative linear solver for 2-D grids.
  double linear_tol = 1e-12;

  void validate() const;
};

struct HJBStepResult {
  ScalarField u;
  DriftField policy;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves (u_next - u)/dt + nu Lap_h u - g_h(T_{1/eps} m, Du) + F^eps(m) = 0.
/// `m_frame` is the density at the end of the step.
HJBStepResult hjb_step(const ScalarField& u_next, const ScalarField& m_frame,
                       double t, const ModelParams& params,
                       const CouplingSpec& coupling, const HJBOptions& opts);

struct HJBSolution {
  SpaceTimeField u;
  /// nt + 1 frames. Frame k < nt drives the step t_k -> t_{k+1}; it is the
  /// upwind H_p at (T_{1/eps} m_{k+1}, Du_k). Frame nt uses (m_nt, Du_nt).
  std::vector<DriftField> policy;
  double newton_residual_max = 0.0;
};

HJBSolution solve_hjb_backward(const SpaceTimeField& m_traj,
                               const ModelParams& params,
                               const CouplingSpec& coupling,
                               const HJBOptions& opts);

/// Recomputes the policy frames from (u, m) with the solver's pairing.
std::vector<DriftField> recompute_policy(const SpaceTimeField& u_traj,
                                         const SpaceTimeField& m_traj,
                                         const ModelParams& params,
                                         double epsilon);

}  // namespace mfgc

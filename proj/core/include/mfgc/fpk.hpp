#pragma once

// Forward Kolmogorov solver built as the exact discrete adjoint of the
// linearized HJB transport:  (I - dt nu Lap + dt A_k)^T m_{k+1} = m_k.

#include <vector>

#include "mfgc/grid.hpp"
#include "mfgc/model.hpp"
#include "mfgc/transport.hpp"

namespace mfgc {

struct FPKOptions {
  double linear_tol = 1e-12;
  bool enforce_nonneg_check = true;

  void validate() const;
};

ScalarField fpk_step(const ScalarField& m_prev, const DriftField& policy_frame,
                     const ModelParams& params, const FPKOptions& opts = {});

/// Frame 0 is m0; frame k+1 is fpk_step(frame k, policy[k]).
SpaceTimeField solve_fpk_forward(const std::vector<DriftField>& policy,
                                 const ScalarField& m0,
                                 const ModelParams& params,
                                 const FPKOptions& opts = {});

}  // namespace mfgc

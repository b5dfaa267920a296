#pragma once

#include "mfgc/grid.hpp"
#include "mfgc/model.hpp"

namespace mfgc {

/// Periodic Gaussian convolution with standard deviation `eps`. The discrete
/// kernel is normalized to unit sum, so mass and nonnegativity are preserved.
/// eps == 0 is the identity.
ScalarField mollify(const ScalarField& f, double eps);

/// F^eps(m) = rho_eps * F(rho_eps * m).
ScalarField regularized_running_cost(const ScalarField& m,
                                     const CouplingSpec& coupling, double eps);
/// G^eps(m) = rho_eps * G(rho_eps * m).
ScalarField regularized_terminal_cost(const ScalarField& m,
                                      const CouplingSpec& coupling, double eps);

}  // namespace mfgc

#include "mfgc/fpk.hpp"

#include <cmath>
#include <string>

#include "mfgc/errors.hpp"
#include "sparse.hpp"

namespace mfgc {

void FPKOptions::validate() const {
  if (!(linear_tol > 0.0)) throw ConfigError("linear_tol must be positive");
}

ScalarField fpk_step(const ScalarField& m_prev, const DriftField& policy_frame,
                     const ModelParams& params, const FPKOptions& opts) {
  opts.validate();
  const GridSpec& grid = m_prev.grid();
  require_same_grid(grid, policy_frame.grid, "fpk_step");
  if (!m_prev.all_finite()) {
    throw NonFiniteState("fpk_step received a non-finite density");
  }
  const TransportOperator A(policy_frame);
  const detail::SparseMatrix J =
      detail::implicit_operator(grid, params.nu, grid.dt(), A);
  const detail::SparseMatrix Jt = J.transpose();
  // The direct factorization keeps the column sums of J^T (all exactly one)
  // visible in the solution, which is what conserves mass to round-off.
  const detail::Vector m = detail::solve(Jt, detail::to_vector(m_prev),
                                         detail::LinearMethod::direct,
                                         opts.linear_tol);
  ScalarField out = detail::to_field(grid, m);
  if (!out.all_finite()) {
    throw LinearSolveFailed("FPK solve produced non-finite values");
  }
  if (opts.enforce_nonneg_check && out.min() < -1e-12) {
    throw NegativeDensity("FPK step produced min m = " +
                          std::to_string(out.min()));
  }
  return out;
}

SpaceTimeField solve_fpk_forward(const std::vector<DriftField>& policy,
                                 const ScalarField& m0,
                                 const ModelParams& params,
                                 const FPKOptions& opts) {
  const GridSpec& grid = m0.grid();
  const auto nt = static_cast<std::size_t>(grid.nt);
  if (policy.size() < nt) {
    throw GridMismatch("policy trajectory shorter than the time grid");
  }
  if (m0.min() < 0.0) throw ConfigError("initial density must be nonnegative");
  if (std::abs(integrate(m0) - 1.0) > 1e-10) {
    throw ConfigError("initial density must have unit mass");
  }
  SpaceTimeField m(grid, m0);
  for (std::size_t k = 0; k < nt; ++k) {
    m[k + 1] = fpk_step(m[k], policy[k], params, opts);
  }
  return m;
}

}  // namespace mfgc

#include "mfgc/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfgc/errors.hpp"
#include "mfgc/mollify.hpp"
#include "sparse.hpp"

namespace mfgc {

void HJBOptions::validate() const {
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be >= 1");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (!(linear_tol > 0.0)) throw ConfigError("linear_tol must be positive");
}

namespace {

double max_abs(const ScalarField& f) {
  double out = 0.0;
  for (double v : f.values()) out = std::max(out, std::abs(v));
  return out;
}

// Per-unit-time residual of the implicit step.
ScalarField step_residual(const ScalarField& u, const ScalarField& u_next,
                          const ScalarField& m_hat, const ScalarField& cost,
                          const ModelParams& params) {
  const double inv_dt = 1.0 / u.grid().dt();
  const ScalarField lap = laplacian(u);
  const ScalarField g = numerical_hamiltonian(u, m_hat, params);
  ScalarField r(u.grid());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = (u_next[i] - u[i]) * inv_dt + params.nu * lap[i] - g[i] + cost[i];
  }
  return r;
}

}  // namespace

HJBStepResult hjb_step(const ScalarField& u_next, const ScalarField& m_frame,
                       [[maybe_unused]] double t, const ModelParams& params,
                       const CouplingSpec& coupling, const HJBOptions& opts) {
  opts.validate();
  require_same_grid(u_next.grid(), m_frame.grid(), "hjb_step");
  const GridSpec& grid = u_next.grid();
  const double dt = grid.dt();
  if (!u_next.all_finite() || !m_frame.all_finite()) {
    throw NonFiniteState("hjb_step received non-finite data");
  }
  if (m_frame.min() < 0.0) {
    throw std::invalid_argument("hjb_step requires a nonnegative density");
  }

  const ScalarField m_hat = truncate_density(m_frame, opts.epsilon);
  const ScalarField cost =
      regularized_running_cost(m_frame, coupling, opts.epsilon);
  const auto method = detail::default_method(grid);

  HJBStepResult out;
  out.u = u_next;
  ScalarField r = step_residual(out.u, u_next, m_hat, cost, params);
  double rnorm = max_abs(r);
  int it = 0;
  while (rnorm > opts.newton_tol) {
    if (it >= opts.newton_max_iter) {
      throw NewtonDiverged("HJB Newton residual " + std::to_string(rnorm) +
                           " above tolerance after " + std::to_string(it) +
                           " iterations");
    }
    const TransportOperator A(upwind_drift(out.u, m_hat, params));
    const auto J = detail::implicit_operator(grid, params.nu, dt, A);
    const detail::Vector delta =
        detail::solve(J, dt * detail::to_vector(r), method, opts.linear_tol);
    const ScalarField step = detail::to_field(grid, delta);

    // Backtracking on the max-norm residual; the scheme is monotone so a full
    // step almost always succeeds.
    double lambda = 1.0;
    ScalarField trial = out.u;
    for (int ls = 0; ls < 12; ++ls) {
      trial = out.u;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        trial[i] += lambda * step[i];
      }
      r = step_residual(trial, u_next, m_hat, cost, params);
      const double trial_norm = max_abs(r);
      if (trial_norm < rnorm || ls == 11) {
        rnorm = trial_norm;
        break;
      }
      lambda *= 0.5;
    }
    out.u = std::move(trial);
    if (!out.u.all_finite() || !std::isfinite(rnorm)) {
      throw NonFiniteState("HJB Newton produced a non-finite iterate");
    }
    ++it;
    // On fine grids the residual carries nu/h^2 times the rounding error of
    // u; once the update itself is at that level, further steps cannot help.
    if (max_abs(step) <= 64 * std::numeric_limits<double>::epsilon() *
                             (1.0 + max_abs(out.u))) {
      break;
    }
  }
  out.policy = upwind_drift(out.u, m_hat, params);
  out.residual = rnorm;
  out.iterations = it;
  return out;
}

HJBSolution solve_hjb_backward(const SpaceTimeField& m_traj,
                               const ModelParams& params,
                               const CouplingSpec& coupling,
                               const HJBOptions& opts) {
  const GridSpec& grid = m_traj.grid();
  const auto nt = static_cast<std::size_t>(grid.nt);
  HJBSolution sol;
  sol.u = SpaceTimeField(grid);
  sol.policy.resize(nt + 1);
  sol.u[nt] = regularized_terminal_cost(m_traj[nt], coupling, opts.epsilon);
  sol.policy[nt] = upwind_drift(
      sol.u[nt], truncate_density(m_traj[nt], opts.epsilon), params);
  for (std::size_t k = nt; k-- > 0;) {
    auto step = hjb_step(sol.u[k + 1], m_traj[k + 1], grid.time(static_cast<int>(k)),
                         params, coupling, opts);
    sol.newton_residual_max = std::max(sol.newton_residual_max, step.residual);
    sol.u[k] = std::move(step.u);
    sol.policy[k] = std::move(step.policy);
  }
  return sol;
}

std::vector<DriftField> recompute_policy(const SpaceTimeField& u_traj,
                                         const SpaceTimeField& m_traj,
                                         const ModelParams& params,
                                         double epsilon) {
  require_same_grid(u_traj.grid(), m_traj.grid(), "recompute_policy");
  const auto nt = static_cast<std::size_t>(u_traj.grid().nt);
  std::vector<DriftField> out(nt + 1);
  for (std::size_t k = 0; k <= nt; ++k) {
    const std::size_t mk = std::min(k + 1, nt);
    out[k] = upwind_drift(u_traj[k], truncate_density(m_traj[mk], epsilon),
                          params);
  }
  return out;
}

}  // namespace mfgc

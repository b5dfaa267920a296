#include "mfgc/coupler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "mfgc/errors.hpp"

namespace mfgc {

void FixedPointOptions::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw ConfigError("damping must lie in (0, 1]");
  }
  if (!(fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
  if (max_outer_iter < 1) throw ConfigError("max_outer_iter must be >= 1");
  if (!(min_damping > 0.0 && min_damping <= damping)) {
    throw ConfigError("min_damping must lie in (0, damping]");
  }
  hjb.validate();
  fpk.validate();
}

ScalarField normalize_mass(ScalarField f) {
  const double mass = integrate(f);
  if (!(mass > 0.0)) throw ConfigError("density has nonpositive mass");
  f *= 1.0 / mass;
  return f;
}

ScalarField uniform_density(const GridSpec& grid) {
  return ScalarField(grid, 1.0);
}

ScalarField cosine_bump(const GridSpec& grid, double amplitude) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ScalarField f(grid);
  const int rows = grid.dim == 2 ? grid.n : 1;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      double c = std::cos(two_pi * grid.center(i));
      if (grid.dim == 2) c *= std::cos(two_pi * grid.center(j));
      f.at(i, j) = 1.0 + amplitude * c;
    }
  }
  if (f.min() < 0.0) throw ConfigError("cosine bump amplitude too large");
  return normalize_mass(std::move(f));
}

ModelParams effective_params(const ModelParams& base, const SolutionMeta& meta) {
  ModelParams p = base;
  p.mu = meta.mu;
  return p;
}

namespace {

SpaceTimeField blend(const SpaceTimeField& a, const SpaceTimeField& b,
                     double weight_b) {
  SpaceTimeField out = a;
  for (std::size_t k = 0; k < out.levels(); ++k) {
    auto& dst = out[k];
    const auto& src = b[k];
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] = (1.0 - weight_b) * dst[i] + weight_b * src[i];
    }
  }
  return out;
}

}  // namespace

MFGSolution solve_mfg(const MFGProblem& problem, const FixedPointOptions& opts,
                      double eps, std::optional<double> mu_override,
                      const SpaceTimeField* warm_start) {
  const auto start = std::chrono::steady_clock::now();
  opts.validate();
  if (!(eps >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  const GridSpec& grid = problem.grid;
  require_same_grid(grid, problem.m0.grid(), "initial density");

  ModelParams params = problem.params;
  if (mu_override) params.mu = *mu_override;
  const auto structure = check_structure(params);
  if (!structure.valid_ranges) {
    throw ConfigError("parameters violate the structural ranges: " +
                      structure.violations.front());
  }
  if (params.singular() && warm_start == nullptr) {
    throw ConfigError(
        "mu = 0 is reachable only by continuation from a warm start");
  }
  if (problem.m0.min() < 0.0) {
    throw ConfigError("initial density must be nonnegative");
  }

  HJBOptions hjb_opts = opts.hjb;
  hjb_opts.epsilon = eps;
  const ScalarField m0 = normalize_mass(mollify(problem.m0, eps));

  SpaceTimeField m;
  if (warm_start != nullptr) {
    require_same_grid(grid, warm_start->grid(), "warm start");
    m = *warm_start;
  } else if (opts.init_m) {
    m = SpaceTimeField(grid, normalize_mass(*opts.init_m));
  } else {
    m = SpaceTimeField(grid, uniform_density(grid));
  }
  m[0] = m0;

  MFGSolution sol;
  sol.meta.epsilon = eps;
  sol.meta.mu = params.mu;

  SpaceTimeField best = m;
  double best_increment = std::numeric_limits<double>::infinity();
  double damping = opts.damping;
  std::optional<SpaceTimeField> last_step;
  for (int it = 1; it <= opts.max_outer_iter; ++it) {
    const HJBSolution hjb = solve_hjb_backward(m, params, problem.coupling,
                                               hjb_opts);
    const SpaceTimeField response =
        solve_fpk_forward(hjb.policy, m0, params, opts.fpk);
    if (opts.adaptive_damping) {
      SpaceTimeField step = response;
      for (std::size_t k = 0; k < step.levels(); ++k) step[k] -= m[k];
      if (last_step && damping > opts.min_damping) {
        double dot = 0.0;
        for (std::size_t k = 0; k < step.levels(); ++k) {
          dot += inner(step[k], (*last_step)[k]);
        }
        if (dot < 0.0) damping = std::max(0.5 * damping, opts.min_damping);
      }
      last_step = std::move(step);
    }
    SpaceTimeField next = blend(m, response, damping);
    const double increment = l1_distance(next, m) * (opts.damping / damping);
    sol.meta.increments.push_back(increment);
    sol.meta.outer_iters = it;
    m = std::move(next);
    if (increment < best_increment) {
      best_increment = increment;
      best = m;
    }
    if (increment <= opts.fp_tol) {
      sol.meta.converged = true;
      break;
    }
  }
  sol.meta.final_damping = damping;
  if (!sol.meta.converged) m = std::move(best);

  HJBSolution hjb = solve_hjb_backward(m, params, problem.coupling, hjb_opts);
  sol.u = std::move(hjb.u);
  sol.policy = std::move(hjb.policy);
  sol.m = std::move(m);
  sol.meta.newton_residual_max = hjb.newton_residual_max;
  sol.meta.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return sol;
}

double fixed_point_residual(const MFGSolution& sol, const MFGProblem& problem,
                            const FixedPointOptions& opts) {
  const ModelParams params = effective_params(problem.params, sol.meta);
  HJBOptions hjb_opts = opts.hjb;
  hjb_opts.epsilon = sol.meta.epsilon;
  const HJBSolution hjb =
      solve_hjb_backward(sol.m, params, problem.coupling, hjb_opts);
  const SpaceTimeField response =
      solve_fpk_forward(hjb.policy, sol.m[0], params, opts.fpk);
  return l1_distance(response, sol.m);
}

void ContinuationSchedule::validate() const {
  if (epsilons.empty()) throw ConfigError("schedule needs at least one epsilon");
  for (std::size_t j = 0; j < epsilons.size(); ++j) {
    if (!(epsilons[j] >= 0.0)) throw ConfigError("epsilons must be >= 0");
    if (j > 0 && !(epsilons[j] < epsilons[j - 1])) {
      throw ConfigError("epsilons must be strictly decreasing");
    }
  }
  for (std::size_t j = 0; j < mus.size(); ++j) {
    if (!(mus[j] >= 0.0)) throw ConfigError("mus must be >= 0");
    if (j > 0 && !(mus[j] < mus[j - 1])) {
      throw ConfigError("mus must be strictly decreasing");
    }
  }
  if (!mus.empty() && mus.back() == 0.0 && !allow_singular) {
    throw ConfigError("a mu = 0 rung requires allow_singular");
  }
}

std::size_t ContinuationSchedule::rungs(const ModelParams&) const {
  return std::max<std::size_t>(epsilons.size(), std::max<std::size_t>(mus.size(), 1));
}

double ContinuationSchedule::epsilon_at(std::size_t j) const {
  return epsilons[std::min(j, epsilons.size() - 1)];
}

double ContinuationSchedule::mu_at(std::size_t j,
                                   const ModelParams& params) const {
  if (mus.empty()) return params.mu;
  return mus[std::min(j, mus.size() - 1)];
}

ContinuationResult solve_with_continuation(
    const MFGProblem& problem, const FixedPointOptions& opts,
    const ContinuationSchedule& schedule) {
  schedule.validate();
  ContinuationResult out;
  const std::size_t rungs = schedule.rungs(problem.params);
  for (std::size_t j = 0; j < rungs; ++j) {
    const double eps = schedule.epsilon_at(j);
    const double mu = schedule.mu_at(j, problem.params);
    const SpaceTimeField* warm =
        schedule.warm_start && !out.solutions.empty()
            ? &out.solutions.back().m
            : nullptr;
    try {
      MFGSolution sol = solve_mfg(problem, opts, eps, mu, warm);
      const bool converged = sol.meta.converged;
      out.solutions.push_back(std::move(sol));
      if (!converged) {
        out.failure = "rung " + std::to_string(j) +
                      " exhausted max_outer_iter without converging";
      }
    } catch (const Error& e) {
      out.failure = "rung " + std::to_string(j) + ": " + e.what();
    }
    if (out.failure) break;
  }
  for (std::size_t j = 0; j + 1 < out.solutions.size(); ++j) {
    out.cauchy_table.push_back(
        {l1_distance(out.solutions[j + 1].m, out.solutions[j].m),
         l1_distance(out.solutions[j + 1].u, out.solutions[j].u)});
  }
  return out;
}

}  // namespace mfgc

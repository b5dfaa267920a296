#pragma once

// MFG fixed point: damped Picard iteration m <- (1-d) m + d FPK(HJB(m)),
// the epsilon-regularization ladder and the mu -> 0 continuation.

#include <optional>
#include <string>
#include <vector>

#include "mfgc/fpk.hpp"
#include "mfgc/grid.hpp"
#include "mfgc/hjb.hpp"
#include "mfgc/model.hpp"
#include "mfgc/mollify.hpp"
#include "mfgc/transport.hpp"

namespace mfgc {

struct MFGProblem {
  GridSpec grid;
  ModelParams params;
  CouplingSpec coupling;
  /// Initial density; normalized to unit mass after mollification.
  ScalarField m0;
};

struct FixedPointOptions {
  double damping = 0.5;
  double fp_tol = 1e-8;
  int max_outer_iter = 500;
  /// Halve the damping whenever two consecutive increments point in opposite
  /// directions (a discrete 2-cycle), down to `min_damping`. Convergence is
  /// still judged on the increment rescaled to the initial damping.
  bool adaptive_damping = false;
  double min_damping = 1e-3;
  /// Initial density guess for every time level; uniform when empty.
  std::optional<ScalarField> init_m;
  HJBOptions hjb;
  FPKOptions fpk;

  void validate() const;
};

struct SolutionMeta {
  double epsilon = 0.0;
  double mu = 0.0;
  int outer_iters = 0;
  std::vector<double> increments;
  double newton_residual_max = 0.0;
  /// Damping in force at exit (differs from the option when adaptive).
  double final_damping = 0.0;
  bool converged = false;
  double wall_time_seconds = 0.0;
};

struct MFGSolution {
  SpaceTimeField u;
  SpaceTimeField m;
  std::vector<DriftField> policy;
  SolutionMeta meta;

  const GridSpec& grid() const { return m.grid(); }
};

/// Damped Picard solve at regularization `eps`. Returns the best iterate
/// with meta.converged == false when max_outer_iter is exhausted.
/// `warm_start` seeds the density trajectory; it is mandatory when the
/// effective mu is 0.
MFGSolution solve_mfg(const MFGProblem& problem, const FixedPointOptions& opts,
                      double eps, std::optional<double> mu_override = {},
                      const SpaceTimeField* warm_start = nullptr);

/// L1(Q_T) change of m under one undamped HJB + FPK sweep from `sol`.
double fixed_point_residual(const MFGSolution& sol, const MFGProblem& problem,
                            const FixedPointOptions& opts);

/// Reconstructs the parameter set a solution was computed with.
ModelParams effective_params(const ModelParams& base, const SolutionMeta& meta);

struct ContinuationSchedule {
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
  /// Empty means the problem's own mu.
  std::vector<double> mus;
  bool warm_start = true;
  /// Permits a final mu == 0 rung.
  bool allow_singular = false;

  void validate() const;
  /// Number of rungs; shorter lists repeat their last entry.
  std::size_t rungs(const ModelParams& params) const;
  double epsilon_at(std::size_t j) const;
  double mu_at(std::size_t j, const ModelParams& params) const;
};

struct CauchyRow {
  double m_gap = 0.0;  ///< ||m_{j+1} - m_j||_{L1(Q_T)}
  double u_gap = 0.0;  ///< ||u_{j+1} - u_j||_{L1(Q_T)}
};

struct ContinuationResult {
  std::vector<MFGSolution> solutions;
  std::vector<CauchyRow> cauchy_table;
  /// Set when a rung failed; later rungs were skipped.
  std::optional<std::string> failure;
};

ContinuationResult solve_with_continuation(const MFGProblem& problem,
                                           const FixedPointOptions& opts,
                                           const ContinuationSchedule& schedule);

/// m0 proportional to 1 + amplitude cos(2 pi x) (times cos(2 pi y) in 2-D),
/// normalized to unit mass.
ScalarField cosine_bump(const GridSpec& grid, double amplitude);
/// Constant unit density.
ScalarField uniform_density(const GridSpec& grid);
/// Rescales a nonnegative field to unit mass.
ScalarField normalize_mass(ScalarField f);

}  // namespace mfgc

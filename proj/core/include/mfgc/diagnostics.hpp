#pragma once

// Integral identities and a-priori quantities evaluated on computed
// solutions. Space integrals are h^dim-weighted sums, time integrals are
// dt-weighted sums over the nt steps, gradients are the solver's clipped
// upwind differences.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfgc/coupler.hpp"

namespace mfgc {

/// How step k of a time integral pairs density and value frames.
enum class TimePairing {
  /// (m_k, u_k): plain left rectangle rule on the stored levels.
  collocated,
  /// (m_{k+1}, u_k): the pairing built into the discrete scheme, under which
  /// the energy identity holds up to solver tolerances.
  scheme,
};

/// |LHS - RHS| of
///   int int m (H_p.Du - H) + int m(T) G(m(T)) + int int m F(m) = <u(0), m_0>.
double energy_identity_residual(const MFGSolution& sol, const ModelParams& params,
                                const CouplingSpec& coupling,
                                TimePairing pairing = TimePairing::collocated);

/// RHS - LHS of the crossed inequality with (u, m) from `solA` and
/// (u~, m~) from `solB`:
///   <m~_0, u(0)> <= int G(m(T)) m~(T) + int int F(m) m~
///                   + int int [m~ H_p(m~, Du~).Du - m~ H(m, Du)].
/// Evaluated with the scheme pairing; nonnegative up to solver slack.
double crossed_energy_gap(const MFGSolution& solA, const MFGSolution& solB,
                          const ModelParams& params,
                          const CouplingSpec& coupling);

struct UniquenessGap {
  double gap = 0.0;
  /// Minimum over cells and steps of the pointwise E integrand.
  double E_min_sampled = 0.0;
};

/// int (G(m(T)) - G(m~(T)))(m(T) - m~(T)) + int int E(m, Du, m~, Du~).
UniquenessGap uniqueness_gap(const MFGSolution& solA, const MFGSolution& solB,
                             const ModelParams& params,
                             const CouplingSpec& coupling);

struct DiagnosticsReport {
  double energy_residual = 0.0;
  double crossed_gap = 0.0;
  double mass_drift = 0.0;
  double min_m = 0.0;
  double u_lower_slack = 0.0;
  double integ_HpDu_minus_H = 0.0;
  double integ_DuBeta = 0.0;
  double integ_mDuBeta = 0.0;
  double norm_m_power = 0.0;
  double integ_Fm = 0.0;
  double integ_Gm = 0.0;
  double vanishing_gradient = 0.0;

  bool flag_negative_m = false;
  bool flag_mass_drift = false;
  bool flag_u_lower = false;

  bool clean() const {
    return !flag_negative_m && !flag_mass_drift && !flag_u_lower;
  }
  /// Flat key -> number view (flags as 0/1).
  std::map<std::string, double> as_map() const;
};

DiagnosticsReport apriori_report(const MFGSolution& sol,
                                 const ModelParams& params,
                                 const CouplingSpec& coupling);

/// int int_{m < theta} |Du|, the discrete proxy for Du = 0 on {m = 0}.
double vanishing_gradient_functional(const MFGSolution& sol, double theta);

struct ESample {
  double min_value = 0.0;
  double m1 = 0.0, m2 = 0.0;
  std::vector<double> p1, p2;
};

/// Seeded random search for the minimum of the pointwise E integrand over
/// tuples (m1, p1, m2, p2); half the samples are local perturbations.
ESample sample_e_functional(const ModelParams& params,
                            const CouplingSpec& coupling, std::size_t samples,
                            std::uint64_t seed, int dim = 2);

}  // namespace mfgc

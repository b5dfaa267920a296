#pragma once

// Congestion Hamiltonian H(m, p) = |p|^beta / (beta (m + mu)^alpha), the
// couplings F and G, structural constants and the assumption probes.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mfgc {

/// Constants of the growth/coercivity assumptions, sharp for the power family.
struct StructuralConstants {
  double c0 = 0.0;  ///< coercivity:  H >= c0 |p|^b/(m+mu)^a - c1 (1 + m^gamma)
  double c1 = 0.0;
  double c2 = 0.0;  ///< growth:      |H_p| <= c2 (1 + |p|^{b-1}/(m+mu)^a)
  double c3 = 0.0;  ///< convexity:   H_p.p >= (1+sigma) H - c3 (1 + m^gamma)
  double c4 = 0.0;  ///< lower bound of F and G
  double sigma = 0.0;
};

/// Bounds lambda f - kappa <= F <= f/lambda + kappa tying F, G to f, g.
struct CouplingBounds {
  double lambda = 1.0;
  double kappa = 1.0;
};

/// Constants C0, C1, C2 for which
/// m^{gamma+1} (|H_p|^2 - C0) <= C1 m (H_p.p - H + C2) holds.
struct HpSquareConstants {
  double C0 = 1.0;
  double C1 = 1.0;
  double C2 = 0.0;
};

// Monotone piecewise-linear table; linear extrapolation past the last node.
struct CouplingTable {
  std::vector<double> m;
  std::vector<double> value;

  double operator()(double x) const;
};

class CouplingSpec {
 public:
  enum class Family { power, tabulated };

  /// F(m) = cF m^qF + offsetF,  G(m) = cG m^qG + offsetG.
  static CouplingSpec power(double cF, double qF, double offsetF, double cG,
                            double qG, double offsetG);
  static CouplingSpec tabulated(CouplingTable F, CouplingTable G);

  double F(double m) const;
  double G(double m) const;
  /// The comparison function f(s) = cF s^qF (tabulated: F - F(0)).
  double f(double s) const;

  /// min(F(0), G(0)); both couplings are nondecreasing.
  double lower_bound() const;

  Family family() const { return family_; }
  double cF() const { return cF_; }
  double qF() const { return qF_; }
  double offsetF() const { return offsetF_; }
  double cG() const { return cG_; }
  double qG() const { return qG_; }
  double offsetG() const { return offsetG_; }
  const CouplingTable& tableF() const { return tableF_; }
  const CouplingTable& tableG() const { return tableG_; }

 private:
  Family family_ = Family::power;
  double cF_ = 0.0, qF_ = 1.0, offsetF_ = 0.0;
  double cG_ = 0.0, qG_ = 1.0, offsetG_ = 0.0;
  CouplingTable tableF_, tableG_;
};

struct ModelParams {
  double nu = 0.5;
  double beta = 2.0;
  double alpha = 1.0;
  double mu = 1.0;
  double horizon = 1.0;
  /// Density floor used in place of m when mu == 0.
  double m_floor = 1e-10;

  StructuralConstants structural;
  CouplingBounds coupling_bounds;

  /// Builds the parameter set and fills the sharp structural constants
  /// for the power Hamiltonian together with c4, lambda, kappa from `coupling`.
  static ModelParams make(double nu, double beta, double alpha, double mu,
                          double horizon, const CouplingSpec& coupling);

  double gamma() const { return alpha / (beta - 1.0); }
  double c_beta() const { return (beta - 1.0) / beta; }
  /// beta' = beta / (beta - 1).
  double beta_conjugate() const { return beta / (beta - 1.0); }
  bool singular() const { return mu == 0.0; }

  HpSquareConstants hp2_constants() const;
};

// Scalar kernels shared by the PDE solvers. `d` is the congestion
// denominator (m + mu)^alpha already evaluated.

/// (m + mu)^alpha, or max(m, m_floor)^alpha when mu == 0.
double congestion_denominator(double m, const ModelParams& params);
/// 0 when mu == 0 and m <= m_floor, else 1.
double support_indicator(double m, const ModelParams& params);

/// H in terms of |p|^2.
double hamiltonian_sq(double m, double p_sq, const ModelParams& params);
/// s such that H_p = s p, i.e. s = |p|^{beta-2} / (m+mu)^alpha; 0 at p == 0.
double hp_scale_sq(double m, double p_sq, const ModelParams& params);

double eval_H(double m, std::span<const double> p, const ModelParams& params);
std::vector<double> eval_Hp(double m, std::span<const double> p,
                            const ModelParams& params);

struct StructureReport {
  bool valid_ranges = false;
  double uniqueness_threshold = 0.0;
  bool uniqueness_ok = false;
  bool hp2_sampled_ok = false;
  std::vector<std::string> violations;
};

StructureReport check_structure(const ModelParams& params);

/// Checks m^{gamma+1}(|H_p|^2 - C0) <= C1 m (H_p.p - H + C2) on a log grid
/// m, |p| in [lo, hi] with `points` nodes per axis.
bool hp2_sampled(const ModelParams& params, double lo = 1e-6, double hi = 1e6,
                 std::size_t points = 61);

struct GridSearchSpec {
  double radius = 50.0;
  std::size_t points_per_dim = 201;
  double refine_tol = 1e-13;
};

/// |H(m,p) - sup_w(-p.w - c_beta (m+mu)^gamma |w|^{beta'})| with the sup
/// taken by a box grid search in w followed by a 1-D refinement along -p.
double legendre_residual(double m, std::span<const double> p,
                         const ModelParams& params,
                         const GridSearchSpec& search = {});

struct MonotoneProbe {
  bool monotone = false;
  double min_slope = 0.0;
};

/// Samples h(s) = -z H(m_s,p_s) + m_s H_p(m_s,p_s).r + z F(m_s) on [0,1].
MonotoneProbe h_monotone_probe(double m, double z, std::span<const double> p,
                               std::span<const double> r,
                               const ModelParams& params,
                               const CouplingSpec& coupling,
                               std::size_t n_samples = 101);

/// Uniqueness integrand
///   E = -(H1 - H2)(m1 - m2) + (m1 H_p1 - m2 H_p2).(p1 - p2) + (F1 - F2)(m1 - m2).
double e_functional(double m1, std::span<const double> p1, double m2,
                    std::span<const double> p2, const ModelParams& params,
                    const CouplingSpec& coupling);

}  // namespace mfgc

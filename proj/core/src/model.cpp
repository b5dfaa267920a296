#include "mfgc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mfgc/errors.hpp"

namespace mfgc {

namespace {

double norm_sq(std::span<const double> p) {
  return std::inner_product(p.begin(), p.end(), p.begin(), 0.0);
}

bool is_zero(std::span<const double> p) {
  return std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; });
}

// Exact (unguarded) denominator used by the pointwise evaluators.
double exact_denominator(double m, const ModelParams& params) {
  return std::pow(m + params.mu, params.alpha);
}

void require_defined(double m, std::span<const double> p,
                     const ModelParams& params) {
  if (m < 0.0) throw std::invalid_argument("density must be nonnegative");
  if (params.mu == 0.0 && m == 0.0 && !is_zero(p)) {
    throw SingularEvaluation("H undefined at m = 0, p != 0 when mu = 0");
  }
}

}  // namespace

double CouplingTable::operator()(double x) const {
  if (m.empty()) return 0.0;
  if (m.size() == 1) return value.front();
  if (x <= m.front()) return value.front();
  auto it = std::upper_bound(m.begin(), m.end(), x);
  std::size_t hi = it == m.end() ? m.size() - 1
                                 : static_cast<std::size_t>(it - m.begin());
  std::size_t lo = hi - 1;
  double slope = (value[hi] - value[lo]) / (m[hi] - m[lo]);
  return value[lo] + slope * (x - m[lo]);
}

CouplingSpec CouplingSpec::power(double cF, double qF, double offsetF,
                                 double cG, double qG, double offsetG) {
  if (cF < 0.0 || qF < 0.0 || cG < 0.0 || qG < 0.0) {
    throw ConfigError("power coupling coefficients and exponents must be >= 0");
  }
  CouplingSpec spec;
  spec.family_ = Family::power;
  spec.cF_ = cF;
  spec.qF_ = qF;
  spec.offsetF_ = offsetF;
  spec.cG_ = cG;
  spec.qG_ = qG;
  spec.offsetG_ = offsetG;
  return spec;
}

CouplingSpec CouplingSpec::tabulated(CouplingTable F, CouplingTable G) {
  auto validate = [](const CouplingTable& t, const char* name) {
    if (t.m.empty() || t.m.size() != t.value.size()) {
      throw ConfigError(std::string("table ") + name + " is empty or ragged");
    }
    if (t.m.front() != 0.0) {
      throw ConfigError(std::string("table ") + name + " must start at m = 0");
    }
    for (std::size_t i = 1; i < t.m.size(); ++i) {
      if (!(t.m[i] > t.m[i - 1])) {
        throw ConfigError(std::string("table ") + name +
                          " nodes must be strictly increasing");
      }
      if (t.value[i] < t.value[i - 1]) {
        throw ConfigError(std::string("table ") + name +
                          " values must be nondecreasing");
      }
    }
  };
  validate(F, "F");
  validate(G, "G");
  CouplingSpec spec;
  spec.family_ = Family::tabulated;
  spec.tableF_ = std::move(F);
  spec.tableG_ = std::move(G);
  spec.offsetF_ = spec.tableF_.value.front();
  spec.offsetG_ = spec.tableG_.value.front();
  return spec;
}

double CouplingSpec::F(double m) const {
  if (family_ == Family::tabulated) return tableF_(m);
  return cF_ * std::pow(m, qF_) + offsetF_;
}

double CouplingSpec::G(double m) const {
  if (family_ == Family::tabulated) return tableG_(m);
  return cG_ * std::pow(m, qG_) + offsetG_;
}

double CouplingSpec::f(double s) const {
  if (family_ == Family::tabulated) return tableF_(s) - offsetF_;
  return cF_ * std::pow(s, qF_);
}

double CouplingSpec::lower_bound() const { return std::min(F(0.0), G(0.0)); }

ModelParams ModelParams::make(double nu, double beta, double alpha, double mu,
                              double horizon, const CouplingSpec& coupling) {
  ModelParams p;
  p.nu = nu;
  p.beta = beta;
  p.alpha = alpha;
  p.mu = mu;
  p.horizon = horizon;
  p.structural.c0 = 1.0 / beta;
  p.structural.c1 = 0.0;
  p.structural.c2 = 1.0;
  p.structural.c3 = 0.0;
  p.structural.sigma = beta - 1.0;
  p.structural.c4 = coupling.lower_bound();
  p.coupling_bounds.lambda = 1.0;
  p.coupling_bounds.kappa =
      std::max(std::abs(coupling.offsetF()), std::abs(coupling.offsetG())) +
      1e-6;
  return p;
}

HpSquareConstants ModelParams::hp2_constants() const {
  // With C0 = 1 the inequality reduces to (m/(m+mu))^gamma <= C1 (b-1)/b.
  return {1.0, beta / (beta - 1.0), 0.0};
}

double congestion_denominator(double m, const ModelParams& params) {
  if (params.mu > 0.0) return std::pow(m + params.mu, params.alpha);
  return std::pow(std::max(m, params.m_floor), params.alpha);
}

double support_indicator(double m, const ModelParams& params) {
  if (params.mu > 0.0) return 1.0;
  return m > params.m_floor ? 1.0 : 0.0;
}

double hamiltonian_sq(double m, double p_sq, const ModelParams& params) {
  if (p_sq == 0.0) return 0.0;
  return support_indicator(m, params) * std::pow(p_sq, 0.5 * params.beta) /
         (params.beta * congestion_denominator(m, params));
}

double hp_scale_sq(double m, double p_sq, const ModelParams& params) {
  if (p_sq == 0.0) return 0.0;
  return support_indicator(m, params) *
         std::pow(p_sq, 0.5 * (params.beta - 2.0)) /
         congestion_denominator(m, params);
}

double eval_H(double m, std::span<const double> p, const ModelParams& params) {
  require_defined(m, p, params);
  double p_sq = norm_sq(p);
  if (p_sq == 0.0) return 0.0;
  return std::pow(p_sq, 0.5 * params.beta) /
         (params.beta * exact_denominator(m, params));
}

std::vector<double> eval_Hp(double m, std::span<const double> p,
                            const ModelParams& params) {
  require_defined(m, p, params);
  std::vector<double> out(p.size(), 0.0);
  double p_sq = norm_sq(p);
  if (p_sq == 0.0) return out;
  double scale = std::pow(p_sq, 0.5 * (params.beta - 2.0)) /
                 exact_denominator(m, params);
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = scale * p[i];
  return out;
}

bool hp2_sampled(const ModelParams& params, double lo, double hi,
                 std::size_t points) {
  if (!(params.beta > 1.0) || !(params.alpha > 0.0)) return false;
  const auto c = params.hp2_constants();
  const double gamma = params.gamma();
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double m = std::exp(log_lo + step * static_cast<double>(i));
    for (std::size_t j = 0; j < points; ++j) {
      const double pn = std::exp(log_lo + step * static_cast<double>(j));
      const double p[1] = {pn};
      const double H = eval_H(m, p, params);
      const double hp = eval_Hp(m, p, params)[0];
      const double lhs = std::pow(m, gamma + 1.0) * (hp * hp - c.C0);
      const double rhs = c.C1 * m * (hp * pn - H + c.C2);
      if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
      if (lhs > rhs + 1e-12 * (std::abs(lhs) + std::abs(rhs))) return false;
    }
  }
  return true;
}

StructureReport check_structure(const ModelParams& params) {
  StructureReport rep;
  const double beta = params.beta;
  const double alpha = params.alpha;
  if (!(beta > 1.0)) rep.violations.push_back("beta must exceed 1");
  if (!(beta <= 2.0)) rep.violations.push_back("beta must not exceed 2");
  if (!(alpha > 0.0)) rep.violations.push_back("alpha must be positive");
  if (!(params.mu >= 0.0)) rep.violations.push_back("mu must be nonnegative");
  if (!(params.nu > 0.0)) rep.violations.push_back("nu must be positive");
  if (!(params.horizon > 0.0)) rep.violations.push_back("T must be positive");
  rep.valid_ranges = rep.violations.empty();

  rep.uniqueness_threshold = 4.0 * (beta - 1.0) / beta;
  rep.uniqueness_ok = alpha <= rep.uniqueness_threshold;
  if (params.mu == 0.0 && beta == 2.0) rep.uniqueness_ok = alpha < 2.0;

  rep.hp2_sampled_ok = rep.valid_ranges && hp2_sampled(params);
  return rep;
}

double legendre_residual(double m, std::span<const double> p,
                         const ModelParams& params,
                         const GridSearchSpec& search) {
  const std::size_t dim = p.size();
  if (dim == 0 || dim > 2) {
    throw std::invalid_argument("legendre_residual supports 1 or 2 dimensions");
  }
  if (!(m + params.mu > 0.0)) {
    throw std::invalid_argument("legendre_residual requires m + mu > 0");
  }
  if (search.points_per_dim < 3 || search.points_per_dim % 2 == 0) {
    throw std::invalid_argument("grid search needs an odd point count >= 3");
  }
  const double weight = params.c_beta() *
                        std::pow(m + params.mu, params.gamma());
  const double bp = params.beta_conjugate();
  auto objective = [&](std::span<const double> w) {
    double pw = 0.0;
    double wsq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      pw += p[i] * w[i];
      wsq += w[i] * w[i];
    }
    return -pw - weight * std::pow(wsq, 0.5 * bp);
  };

  const std::size_t N = search.points_per_dim;
  const double R = search.radius;
  const double dw = 2.0 * R / static_cast<double>(N - 1);
  auto coord = [&](std::size_t k) { return -R + dw * static_cast<double>(k); };

  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0, best_j = 0;
  double w[2] = {0.0, 0.0};
  const std::size_t nj = dim == 2 ? N : 1;
  for (std::size_t i = 0; i < N; ++i) {
    w[0] = coord(i);
    for (std::size_t j = 0; j < nj; ++j) {
      if (dim == 2) w[1] = coord(j);
      const double v = objective(std::span<const double>(w, dim));
      if (v > best) {
        best = v;
        best_i = i;
        best_j = j;
      }
    }
  }
  auto on_edge = [&](std::size_t k) { return k == 0 || k == N - 1; };
  if (on_edge(best_i) || (dim == 2 && on_edge(best_j))) {
    throw SearchBoxTooSmall("Legendre maximizer lies on the search boundary");
  }

  const double pn = std::sqrt(norm_sq(p));
  double sup = best;
  if (pn > 0.0) {
    // Along w = -s p/|p| the objective is s |p| - weight s^{beta'}, concave.
    auto ray = [&](double s) { return s * pn - weight * std::pow(s, bp); };
    double s0 = 0.0;
    w[0] = coord(best_i);
    w[1] = dim == 2 ? coord(best_j) : 0.0;
    for (std::size_t i = 0; i < dim; ++i) s0 -= w[i] * p[i] / pn;
    const double reach = 2.0 * dw * std::sqrt(static_cast<double>(dim));
    double a = std::max(0.0, s0 - reach);
    double b = std::min(R, s0 + reach);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = ray(x1), f2 = ray(x2);
    while (b - a > search.refine_tol * std::max(1.0, b)) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = ray(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = ray(x1);
      }
    }
    sup = std::max(sup, ray(0.5 * (a + b)));
  }
  return std::abs(eval_H(m, p, params) - sup);
}

MonotoneProbe h_monotone_probe(double m, double z, std::span<const double> p,
                               std::span<const double> r,
                               const ModelParams& params,
                               const CouplingSpec& coupling,
                               std::size_t n_samples) {
  if (p.size() != r.size()) {
    throw std::invalid_argument("p and r must have the same dimension");
  }
  if (z == 0.0 && is_zero(r)) {
    throw DegenerateDirection("(z, r) must not vanish");
  }
  if (m < 0.0 || m + z < 0.0) {
    throw std::invalid_argument("m + s z must stay nonnegative on [0,1]");
  }
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");

  std::vector<double> ps(p.size());
  auto h = [&](double s) {
    const double ms = m + s * z;
    for (std::size_t i = 0; i < p.size(); ++i) ps[i] = p[i] + s * r[i];
    const auto hp = eval_Hp(ms, ps, params);
    double hp_r = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) hp_r += hp[i] * r[i];
    return -z * eval_H(ms, ps, params) + ms * hp_r + z * coupling.F(ms);
  };

  const double step = 1.0 / static_cast<double>(n_samples - 1);
  MonotoneProbe out;
  out.monotone = true;
  out.min_slope = std::numeric_limits<double>::infinity();
  double prev = h(0.0);
  for (std::size_t k = 1; k < n_samples; ++k) {
    const double cur = h(step * static_cast<double>(k));
    const double diff = cur - prev;
    if (!(diff > 0.0)) out.monotone = false;
    out.min_slope = std::min(out.min_slope, diff / step);
    prev = cur;
  }
  return out;
}

double e_functional(double m1, std::span<const double> p1, double m2,
                    std::span<const double> p2, const ModelParams& params,
                    const CouplingSpec& coupling) {
  if (p1.size() != p2.size()) {
    throw std::invalid_argument("p1 and p2 must have the same dimension");
  }
  const double H1 = eval_H(m1, p1, params);
  const double H2 = eval_H(m2, p2, params);
  const auto hp1 = eval_Hp(m1, p1, params);
  const auto hp2 = eval_Hp(m2, p2, params);
  double flux = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    flux += (m1 * hp1[i] - m2 * hp2[i]) * (p1[i] - p2[i]);
  }
  const double dm = m1 - m2;
  return -(H1 - H2) * dm + flux + (coupling.F(m1) - coupling.F(m2)) * dm;
}

}  // namespace mfgc

#include "mfgc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mfgc/errors.hpp"

namespace mfgc {

namespace {

std::size_t density_level(std::size_t k, TimePairing pairing) {
  return pairing == TimePairing::scheme ? k + 1 : k;
}

// Pointwise power-law H and H_p scale at a clipped upwind gradient.
struct PointState {
  double m;      // raw density multiplying the integrand
  double H;      // H(T m, P)
  double scale;  // H_p = scale * P
};

PointState point(const ScalarField& m, const ScalarField& m_hat,
                 const UpwindGradient& P, std::size_t idx,
                 const ModelParams& params) {
  const double q = P.norm_sq(idx);
  return {m[idx], hamiltonian_sq(m_hat[idx], q, params),
          hp_scale_sq(m_hat[idx], q, params)};
}

double dot(const UpwindGradient& a, const UpwindGradient& b, std::size_t idx) {
  double acc = 0.0;
  for (std::size_t c = 0; c < a.components.size(); ++c) {
    acc += a.components[c][idx] * b.components[c][idx];
  }
  return acc;
}

// Signed RHS - LHS of the energy identity.
double energy_balance(const MFGSolution& sol, const ModelParams& base,
                      const CouplingSpec& coupling, TimePairing pairing) {
  const ModelParams params = effective_params(base, sol.meta);
  const double eps = sol.meta.epsilon;
  const GridSpec& g = sol.grid();
  const auto nt = static_cast<std::size_t>(g.nt);
  const double vol = g.cell_volume();

  double running = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& m = sol.m[density_level(k, pairing)];
    const ScalarField m_hat = truncate_density(m, eps);
    const UpwindGradient P = upwind_gradient(sol.u[k]);
    const ScalarField F = regularized_running_cost(m, coupling, eps);
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto s = point(m, m_hat, P, i, params);
      acc += s.m * (s.scale * P.norm_sq(i) - s.H) + F[i] * m[i];
    }
    running += g.dt() * vol * acc;
  }
  const ScalarField G = regularized_terminal_cost(sol.m[nt], coupling, eps);
  const double terminal = inner(G, sol.m[nt]);
  return running + terminal - inner(sol.u[0], sol.m[0]);
}

void require_compatible(const MFGSolution& a, const MFGSolution& b) {
  if (!(a.grid() == b.grid()) || !(a.u.grid() == b.u.grid())) {
    throw GridMismatch("solutions live on different grids");
  }
}

}  // namespace

double energy_identity_residual(const MFGSolution& sol, const ModelParams& params,
                                const CouplingSpec& coupling,
                                TimePairing pairing) {
  return std::abs(energy_balance(sol, params, coupling, pairing));
}

double crossed_energy_gap(const MFGSolution& solA, const MFGSolution& solB,
                          const ModelParams& base,
                          const CouplingSpec& coupling) {
  require_compatible(solA, solB);
  const ModelParams pa = effective_params(base, solA.meta);
  const ModelParams pb = effective_params(base, solB.meta);
  const double eps_a = solA.meta.epsilon;
  const double eps_b = solB.meta.epsilon;
  const GridSpec& g = solA.grid();
  const auto nt = static_cast<std::size_t>(g.nt);
  const double vol = g.cell_volume();

  double running = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& m = solA.m[k + 1];
    const auto& mt = solB.m[k + 1];
    const ScalarField m_hat = truncate_density(m, eps_a);
    const ScalarField mt_hat = truncate_density(mt, eps_b);
    const UpwindGradient P = upwind_gradient(solA.u[k]);
    const UpwindGradient Pt = upwind_gradient(solB.u[k]);
    const ScalarField F = regularized_running_cost(m, coupling, eps_a);
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto a = point(m, m_hat, P, i, pa);
      const auto b = point(mt, mt_hat, Pt, i, pb);
      acc += F[i] * mt[i] + mt[i] * (b.scale * dot(Pt, P, i) - a.H);
    }
    running += g.dt() * vol * acc;
  }
  const ScalarField G = regularized_terminal_cost(solA.m[nt], coupling, eps_a);
  const double rhs = inner(G, solB.m[nt]) + running;
  const double lhs = inner(solB.m[0], solA.u[0]);
  return rhs - lhs;
}

UniquenessGap uniqueness_gap(const MFGSolution& solA, const MFGSolution& solB,
                             const ModelParams& base,
                             const CouplingSpec& coupling) {
  require_compatible(solA, solB);
  const ModelParams pa = effective_params(base, solA.meta);
  const ModelParams pb = effective_params(base, solB.meta);
  const double eps_a = solA.meta.epsilon;
  const double eps_b = solB.meta.epsilon;
  const GridSpec& g = solA.grid();
  const auto nt = static_cast<std::size_t>(g.nt);
  const double vol = g.cell_volume();

  UniquenessGap out;
  out.E_min_sampled = std::numeric_limits<double>::infinity();
  double running = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& m1 = solA.m[k + 1];
    const auto& m2 = solB.m[k + 1];
    const ScalarField m1_hat = truncate_density(m1, eps_a);
    const ScalarField m2_hat = truncate_density(m2, eps_b);
    const UpwindGradient P1 = upwind_gradient(solA.u[k]);
    const UpwindGradient P2 = upwind_gradient(solB.u[k]);
    const ScalarField F1 = regularized_running_cost(m1, coupling, eps_a);
    const ScalarField F2 = regularized_running_cost(m2, coupling, eps_b);
    double acc = 0.0;
    for (std::size_t i = 0; i < m1.size(); ++i) {
      const auto a = point(m1, m1_hat, P1, i, pa);
      const auto b = point(m2, m2_hat, P2, i, pb);
      double flux = 0.0;
      for (std::size_t c = 0; c < P1.components.size(); ++c) {
        const double p1 = P1.components[c][i];
        const double p2 = P2.components[c][i];
        flux += (a.m * a.scale * p1 - b.m * b.scale * p2) * (p1 - p2);
      }
      const double dm = a.m - b.m;
      const double E = -(a.H - b.H) * dm + flux + (F1[i] - F2[i]) * dm;
      out.E_min_sampled = std::min(out.E_min_sampled, E);
      acc += E;
    }
    running += g.dt() * vol * acc;
  }
  const ScalarField G1 = regularized_terminal_cost(solA.m[nt], coupling, eps_a);
  const ScalarField G2 = regularized_terminal_cost(solB.m[nt], coupling, eps_b);
  double terminal = 0.0;
  for (std::size_t i = 0; i < G1.size(); ++i) {
    terminal += (G1[i] - G2[i]) * (solA.m[nt][i] - solB.m[nt][i]);
  }
  out.gap = vol * terminal + running;
  return out;
}

double vanishing_gradient_functional(const MFGSolution& sol, double theta) {
  const GridSpec& g = sol.grid();
  const auto nt = static_cast<std::size_t>(g.nt);
  double acc = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& m = sol.m[k];
    const UpwindGradient P = upwind_gradient(sol.u[k]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] < theta) acc += std::sqrt(P.norm_sq(i));
    }
  }
  return g.dt() * g.cell_volume() * acc;
}

std::map<std::string, double> DiagnosticsReport::as_map() const {
  return {
      {"energy_residual", energy_residual},
      {"crossed_gap", crossed_gap},
      {"mass_drift", mass_drift},
      {"min_m", min_m},
      {"u_lower_slack", u_lower_slack},
      {"integ_HpDu_minus_H", integ_HpDu_minus_H},
      {"integ_DuBeta", integ_DuBeta},
      {"integ_mDuBeta", integ_mDuBeta},
      {"norm_m_power", norm_m_power},
      {"integ_Fm", integ_Fm},
      {"integ_Gm", integ_Gm},
      {"vanishing_gradient", vanishing_gradient},
      {"flag_negative_m", flag_negative_m ? 1.0 : 0.0},
      {"flag_mass_drift", flag_mass_drift ? 1.0 : 0.0},
      {"flag_u_lower", flag_u_lower ? 1.0 : 0.0},
  };
}

DiagnosticsReport apriori_report(const MFGSolution& sol,
                                 const ModelParams& base,
                                 const CouplingSpec& coupling) {
  const ModelParams params = effective_params(base, sol.meta);
  const double eps = sol.meta.epsilon;
  const GridSpec& g = sol.grid();
  const auto nt = static_cast<std::size_t>(g.nt);
  const double vol = g.cell_volume();
  const double dvol = g.dt() * vol;

  DiagnosticsReport rep;
  rep.energy_residual = energy_identity_residual(sol, base, coupling);
  rep.crossed_gap = crossed_energy_gap(sol, sol, base, coupling);

  rep.min_m = sol.m.min();
  for (std::size_t k = 0; k <= nt; ++k) {
    rep.mass_drift = std::max(rep.mass_drift, std::abs(integrate(sol.m[k]) - 1.0));
  }
  rep.u_lower_slack = sol.u.min() - coupling.lower_bound();

  const double q = (g.dim + 2.0) / g.dim;
  const double power = 1.0 + params.gamma();
  double power_sum = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& m = sol.m[k];
    const ScalarField m_hat = truncate_density(m, eps);
    const UpwindGradient P = upwind_gradient(sol.u[k]);
    const ScalarField F = regularized_running_cost(m, coupling, eps);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto s = point(m, m_hat, P, i, params);
      const double p_sq = P.norm_sq(i);
      // |P|^beta / d = beta H, including the singular-regime indicator.
      const double du_beta = params.beta * s.H;
      rep.integ_HpDu_minus_H += dvol * s.m * (s.scale * p_sq - s.H);
      rep.integ_DuBeta += dvol * du_beta;
      rep.integ_mDuBeta += dvol * s.m * du_beta;
      rep.integ_Fm += dvol * F[i] * m[i];
      power_sum += dvol * std::pow(std::pow(std::max(m_hat[i], 0.0), power), q);
    }
  }
  rep.norm_m_power = std::pow(power_sum, 1.0 / q);
  rep.integ_Gm =
      inner(regularized_terminal_cost(sol.m[nt], coupling, eps), sol.m[nt]);
  rep.vanishing_gradient = vanishing_gradient_functional(sol, 1e-3);

  rep.flag_negative_m = rep.min_m < -1e-10;
  rep.flag_mass_drift = rep.mass_drift > 1e-9;
  rep.flag_u_lower = rep.u_lower_slack < -1e-8;
  return rep;
}

ESample sample_e_functional(const ModelParams& params,
                            const CouplingSpec& coupling, std::size_t samples,
                            std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_m(std::log(1e-3), std::log(1e2));
  std::uniform_real_distribution<double> comp(-5.0, 5.0);
  std::uniform_real_distribution<double> local(-0.1, 0.1);
  std::bernoulli_distribution perturb(0.5);
  const double m_min = params.mu > 0.0 ? 0.0 : params.m_floor;

  ESample best;
  best.min_value = std::numeric_limits<double>::infinity();
  std::vector<double> p1(static_cast<std::size_t>(dim));
  std::vector<double> p2(static_cast<std::size_t>(dim));
  for (std::size_t s = 0; s < samples; ++s) {
    const double m1 = std::exp(log_m(rng));
    for (double& v : p1) v = comp(rng);
    double m2;
    if (perturb(rng)) {
      m2 = std::max(m_min + 1e-12, m1 * (1.0 + local(rng)));
      for (std::size_t i = 0; i < p2.size(); ++i) p2[i] = p1[i] + local(rng);
    } else {
      m2 = std::exp(log_m(rng));
      for (double& v : p2) v = comp(rng);
    }
    const double E = e_functional(m1, p1, m2, p2, params, coupling);
    if (E < best.min_value) {
      best.min_value = E;
      best.m1 = m1;
      best.m2 = m2;
      best.p1 = p1;
      best.p2 = p2;
    }
  }
  return best;
}

}  // namespace mfgc

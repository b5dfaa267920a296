#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfgc/errors.hpp"
#include "mfgc/fpk.hpp"
#include "support.hpp"

using namespace mfgc;
using mfgc::test::random_field;

namespace {

DriftField zero_drift(const GridSpec& g) {
  const ScalarField m(g, 1.0);
  return upwind_drift(ScalarField(g), m, test::base_params(test::linear_coupling()));
}

DriftField random_policy(const GridSpec& g, std::mt19937_64& rng,
                         const ModelParams& params, double scale) {
  return upwind_drift(random_field(g, rng, -scale, scale),
                      random_field(g, rng, 0.0, 2.0), params);
}

// Centered variance on the torus around x = 1/2.
double variance(const ScalarField& m) {
  const GridSpec& g = m.grid();
  double v = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double d = g.center(i) - 0.5;
    v += d * d * m[static_cast<std::size_t>(i)] * g.h();
  }
  return v;
}

}  // namespace

TEST_CASE("zero drift keeps constants") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, 16, 4, 1.0);
    const auto p = test::base_params(test::linear_coupling());
    const std::vector<DriftField> policy(5, zero_drift(g));
    const auto m = solve_fpk_forward(policy, uniform_density(g), p);
    for (std::size_t k = 0; k < m.levels(); ++k) {
      CHECK(max_abs_diff(m[k], ScalarField(g, 1.0)) <= 1e-13);
    }
  }
}

TEST_CASE("mass conservation and positivity under random drifts") {
  std::mt19937_64 rng(77);
  const auto c = test::linear_coupling();
  for (double beta : {1.5, 2.0}) {
    const auto params = test::base_params(c, beta, 0.7, 0.2);
    const GridSpec g(1, 32, 16, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto m0 = normalize_mass(random_field(g, rng, 0.0, 1.0));
      const auto m1 = fpk_step(m0, random_policy(g, rng, params, 5.0), params);
      CHECK(std::abs(integrate(m1) - integrate(m0)) <= 1e-13);
      CHECK(m1.min() >= 0.0);
    }
  }
  const auto params = test::base_params(c, 1.5, 0.7, 0.2);
  const GridSpec g2(2, 12, 8, 1.0);
  std::vector<DriftField> policy;
  for (int k = 0; k < 8; ++k) policy.push_back(random_policy(g2, rng, params, 3.0));
  const auto m = solve_fpk_forward(policy, cosine_bump(g2, 0.9), params);
  for (std::size_t k = 0; k < m.levels(); ++k) {
    CHECK(std::abs(integrate(m[k]) - 1.0) <= 1e-12);
    CHECK(m[k].min() >= 0.0);
  }
}

TEST_CASE("step is the adjoint of the implicit HJB operator") {
  // <(I - dt nu Lap + dt A) u, m_next> == <u, m_prev> for every u.
  std::mt19937_64 rng(101);
  const auto c = test::linear_coupling();
  const auto params = test::base_params(c, 1.5, 0.8, 0.4);
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 32 : 10, 8, 1.0);
    const auto drift = random_policy(g, rng, params, 2.0);
    const TransportOperator A(drift);
    const auto m_prev = normalize_mass(random_field(g, rng, 0.0, 1.0));
    const auto m_next = fpk_step(m_prev, drift, params);
    for (int trial = 0; trial < 20; ++trial) {
      const auto u = random_field(g, rng);
      const auto Ju = u + (-g.dt() * params.nu) * laplacian(u) + g.dt() * A.apply(u);
      const double lhs = inner(Ju, m_next), rhs = inner(u, m_prev);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(rhs) + 1e-3));
    }
  }
}

TEST_CASE("heat flow of a cosine mode") {
  // Zero drift: each step multiplies the mode by 1 / (1 + dt nu lambda_h).
  const GridSpec g(1, 64, 20, 1.0);
  const auto p = test::base_params(test::linear_coupling());
  const auto m0 = cosine_bump(g, 0.8);
  const std::vector<DriftField> policy(20, zero_drift(g));
  const auto m = solve_fpk_forward(policy, m0, p);
  const double h = g.h();
  const double lam = 4.0 / (h * h) * std::pow(std::sin(std::numbers::pi * h), 2);
  const double factor = 1.0 / (1.0 + g.dt() * p.nu * lam);
  for (int k = 0; k <= g.nt; ++k) {
    const double amp = std::pow(factor, k);
    for (int i = 0; i < g.n; ++i) {
      const double exact = 1.0 + amp * (m0[static_cast<std::size_t>(i)] - 1.0);
      CHECK(m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] ==
            doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("peaked bump spreads monotonically") {
  const GridSpec g(1, 64, 32, 0.01);
  const auto p = test::base_params(test::linear_coupling());
  ScalarField bump(g);
  for (int i = 0; i < g.n; ++i) {
    const double d = g.center(i) - 0.5;
    bump[static_cast<std::size_t>(i)] = std::exp(-d * d / (2 * 0.05 * 0.05));
  }
  const std::vector<DriftField> policy(32, zero_drift(g));
  const auto m = solve_fpk_forward(policy, normalize_mass(bump), p);
  for (int k = 0; k < g.nt; ++k) {
    CHECK(variance(m[static_cast<std::size_t>(k + 1)]) > variance(m[static_cast<std::size_t>(k)]));
  }
  // Before the tails reach the boundary the variance grows like 2 nu t.
  const double growth = variance(m[32]) - variance(m[0]);
  CHECK(growth == doctest::Approx(2 * p.nu * g.T).epsilon(0.02));
}

TEST_CASE("input validation") {
  const GridSpec g(1, 16, 4, 1.0);
  const auto p = test::base_params(test::linear_coupling());
  const std::vector<DriftField> policy(4, zero_drift(g));
  CHECK_THROWS_AS(solve_fpk_forward(policy, ScalarField(g, 2.0), p), ConfigError);
  CHECK_THROWS_AS(solve_fpk_forward({}, uniform_density(g), p), GridMismatch);
  CHECK_THROWS_AS(fpk_step(uniform_density(GridSpec(1, 8, 4, 1.0)), zero_drift(g), p),
                  GridMismatch);
  FPKOptions o;
  o.linear_tol = 0.0;
  CHECK_THROWS_AS(fpk_step(uniform_density(g), zero_drift(g), p, o), ConfigError);
}

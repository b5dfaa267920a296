#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfgc/errors.hpp"
#include "mfgc/hjb.hpp"
#include "mfgc/mollify.hpp"
#include "support.hpp"

using namespace mfgc;
using mfgc::test::random_field;

namespace {

SpaceTimeField smooth_density(const GridSpec& g) {
  SpaceTimeField m(g);
  for (int k = 0; k <= g.nt; ++k) {
    for (int i = 0; i < g.n; ++i) {
      const double x = g.center(i), t = g.time(k);
      m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
          1.0 + 0.6 * std::cos(2 * std::numbers::pi * (x - 0.3 * t));
    }
  }
  return m;
}

double max_abs(const SpaceTimeField& a, const SpaceTimeField& b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.levels(); ++k) out = std::max(out, max_abs_diff(a[k], b[k]));
  return out;
}

// dt h sum_k<nt sum_x |P(u_k)|^beta / (m_{k+1} + mu)^alpha.
double kinetic_integral(const HJBSolution& sol, const SpaceTimeField& m,
                        const ModelParams& p) {
  const GridSpec& g = m.grid();
  double acc = 0.0;
  for (int k = 0; k < g.nt; ++k) {
    const auto P = upwind_gradient(sol.u[static_cast<std::size_t>(k)]);
    for (std::size_t x = 0; x < g.cells(); ++x) {
      acc += std::pow(P.norm_sq(x), p.beta / 2) /
             std::pow(m[static_cast<std::size_t>(k + 1)][x] + p.mu, p.alpha);
    }
  }
  return acc * g.dt() * g.cell_volume();
}

}  // namespace

TEST_CASE("option validation") {
  HJBOptions o;
  CHECK_NOTHROW(o.validate());
  o.newton_tol = 0.0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
  o = {};
  o.epsilon = -1.0;
  CHECK_THROWS_AS(o.validate(), ConfigError);
}

TEST_CASE("constant data steps exactly") {
  const auto c = CouplingSpec::power(0.0, 1.0, 1.0, 0.0, 1.0, 0.0);  // F == 1
  const auto params = test::base_params(c, 1.5, 0.7, 0.5);
  std::mt19937_64 rng(5);
  for (int dim : {1, 2}) {
    const GridSpec g(dim, 16, 8, 1.0);
    const auto m = random_field(g, rng, 0.0, 3.0);
    const auto s = hjb_step(ScalarField(g, 2.25), m, 0.0, params, c, {});
    for (double v : s.u.values()) CHECK(v == doctest::Approx(2.25 + g.dt()).epsilon(1e-14));
    for (std::size_t axis = 0; axis < static_cast<std::size_t>(dim); ++axis) {
      CHECK(l1_norm(s.policy.drift(static_cast<int>(axis))) == 0.0);
    }
  }
}

TEST_CASE("backward solve with constant density") {
  const auto c = test::linear_coupling();
  const auto params = test::base_params(c);
  const GridSpec g(1, 32, 32, 1.0);
  const auto sol = solve_hjb_backward(SpaceTimeField(g, 1.0), params, c, {});
  for (int k = 0; k <= g.nt; ++k) {
    const double exact = 1.0 + (g.T - g.time(k));
    for (double v : sol.u[static_cast<std::size_t>(k)].values()) {
      CHECK(std::abs(v - exact) <= 1e-12);
    }
  }
}

TEST_CASE("terminal condition and zero costs") {
  const auto c = test::linear_coupling();
  const auto params = test::base_params(c, 1.5, 0.5, 1.0);
  const GridSpec g(1, 32, 16, 1.0);
  const auto m = smooth_density(g);
  HJBOptions o;
  o.epsilon = 0.05;
  const auto sol = solve_hjb_backward(m, params, c, o);
  CHECK(max_abs_diff(sol.u[16], regularized_terminal_cost(m[16], c, 0.05)) == 0.0);

  const auto z = test::zero_coupling();
  const auto zero = solve_hjb_backward(m, test::base_params(z), z, {});
  CHECK(max_abs(zero.u, SpaceTimeField(g)) == 0.0);
}

TEST_CASE("lower bound by the coupling floor") {
  const auto c = CouplingSpec::power(1.0, 1.0, 0.25, 2.0, 1.0, 0.25);
  const auto params = test::base_params(c, 1.5, 0.6, 0.5);
  CHECK(params.structural.c4 == 0.25);
  std::mt19937_64 rng(17);
  const GridSpec g(1, 32, 32, 1.0);
  SpaceTimeField m(g);
  for (std::size_t k = 0; k < m.levels(); ++k) m[k] = random_field(g, rng, 0.0, 2.0);
  const auto sol = solve_hjb_backward(m, params, c, {});
  CHECK(sol.u.min() >= params.structural.c4);
  CHECK(sol.newton_residual_max <= 1e-10);
}

TEST_CASE("discrete comparison principle") {
  std::mt19937_64 rng(23);
  const auto c = test::linear_coupling();
  const auto raised = CouplingSpec::power(1.0, 1.0, 0.3, 1.0, 1.0, 0.1);
  const auto params = test::base_params(c, 1.5, 0.8, 0.5);
  const GridSpec g(1, 16, 8, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    SpaceTimeField m(g);
    for (std::size_t k = 0; k < m.levels(); ++k) m[k] = random_field(g, rng, 0.0, 2.0);
    const auto lo = solve_hjb_backward(m, params, c, {});
    const auto hi = solve_hjb_backward(m, params, raised, {});
    for (std::size_t k = 0; k < m.levels(); ++k) {
      CHECK((hi.u[k] - lo.u[k]).min() >= -1e-12);
    }
    // Monotone in the terminal data of a single step as well.
    const auto a = random_field(g, rng);
    auto b = a;
    b[3] += 0.5;
    const auto sa = hjb_step(a, m[1], 0.0, params, c, {});
    const auto sb = hjb_step(b, m[1], 0.0, params, c, {});
    CHECK((sb.u - sa.u).min() >= -1e-12);
  }
}

TEST_CASE("policy recompute is bitwise") {
  const auto c = test::linear_coupling();
  for (double eps : {0.0, 0.1}) {
    const auto params = test::base_params(c, 1.5, 0.6, 0.5);
    const GridSpec g(2, 8, 6, 1.0);
    std::mt19937_64 rng(31);
    SpaceTimeField m(g);
    for (std::size_t k = 0; k < m.levels(); ++k) m[k] = random_field(g, rng, 0.0, 12.0);
    HJBOptions o;
    o.epsilon = eps;
    const auto sol = solve_hjb_backward(m, params, c, o);
    const auto again = recompute_policy(sol.u, m, params, eps);
    REQUIRE(again.size() == sol.policy.size());
    for (std::size_t k = 0; k < again.size(); ++k) CHECK(again[k] == sol.policy[k]);
    // The stored policy is the exact H_p at the truncated density.
    const auto d = upwind_drift(sol.u[2], truncate_density(m[3], eps), params);
    CHECK(d == sol.policy[2]);
  }
}

TEST_CASE("kinetic integral is stable under time refinement") {
  const auto c = test::linear_coupling();
  const auto params = test::base_params(c, 1.5, 0.6, 0.5);
  double prev = 0.0;
  for (int nt : {16, 32, 64}) {
    const GridSpec g(1, 32, nt, 1.0);
    const auto m = smooth_density(g);
    const auto sol = solve_hjb_backward(m, params, c, {});
    const double k = kinetic_integral(sol, m, params);
    CHECK(std::isfinite(k));
    CHECK(k > 0.0);
    if (prev > 0.0) CHECK(std::abs(k - prev) <= 0.1 * prev);
    prev = k;
  }
}

TEST_CASE("first-order convergence for constant density") {
  // m == 1 and G = cos(2 pi x): compare u(0) to a fine-grid reference.
  const auto c = test::zero_coupling();
  auto solve = [&](int n) {
    const GridSpec g(1, n, n, 1.0);
    const auto params = test::base_params(c);
    ScalarField uT(g);
    for (int i = 0; i < n; ++i) uT[static_cast<std::size_t>(i)] = std::cos(2 * std::numbers::pi * g.center(i));
    ScalarField u = uT;
    for (int k = n; k-- > 0;) u = hjb_step(u, ScalarField(g, 1.0), g.time(k), params, c, {}).u;
    return u;
  };
  const auto ref = solve(1024);
  auto err = [&](int n) {
    const auto u = solve(n);
    const int r = 1024 / n;
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      double avg = 0.0;
      for (int j = 0; j < r; ++j) avg += ref[static_cast<std::size_t>(i * r + j)];
      e += std::abs(u[static_cast<std::size_t>(i)] - avg / r) / n;
    }
    return e;
  };
  const double e1 = err(32), e2 = err(64), e3 = err(128);
  CHECK(e1 > e2);
  CHECK(e2 > e3);
  CHECK(e1 / e2 >= 1.6);
  CHECK(e2 / e3 >= 1.6);
}

TEST_CASE("newton failure is reported") {
  const auto c = test::linear_coupling();
  const auto params = test::base_params(c, 2.0, 1.0, 1.0);
  const GridSpec g(1, 16, 2, 1.0);
  std::mt19937_64 rng(2);
  HJBOptions o;
  o.newton_max_iter = 1;
  o.newton_tol = 1e-15;
  CHECK_THROWS_AS(hjb_step(10.0 * random_field(g, rng), ScalarField(g, 1.0), 0.0,
                           params, c, o),
                  NewtonDiverged);
  ScalarField bad(g, 1.0);
  bad[0] = std::nan("");
  CHECK_THROWS_AS(hjb_step(bad, ScalarField(g, 1.0), 0.0, params, c, {}), NonFiniteState);
}

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mfgc/diagnostics.hpp"
#include "mfgc/errors.hpp"
#include "mfgc/model.hpp"
#include "support.hpp"

using namespace mfgc;
using mfgc::test::base_params;
using mfgc::test::linear_coupling;

namespace {

ModelParams params_for(double beta, double alpha, double mu) {
  return ModelParams::make(0.5, beta, alpha, mu, 1.0, linear_coupling());
}

// Same formula evaluated in long double through exp/log, independent of the
// library's pow-based kernels.
long double H_oracle(long double m, long double px, long double py,
                     long double beta, long double alpha, long double mu) {
  const long double norm = std::sqrt(px * px + py * py);
  if (norm == 0.0L) return 0.0L;
  return std::exp(beta * std::log(norm) - alpha * std::log(m + mu)) / beta;
}

}  // namespace

TEST_CASE("derived exponents") {
  const auto p = params_for(1.5, 0.6, 1.0);
  CHECK(p.gamma() == 0.6 / 0.5);
  CHECK(p.c_beta() == 0.5 / 1.5);
  CHECK(p.beta_conjugate() == doctest::Approx(3.0));
  CHECK(p.structural.c0 == doctest::Approx(1.0 / 1.5));
  CHECK(p.structural.c2 == 1.0);
  CHECK(p.structural.sigma == doctest::Approx(0.5));
  CHECK(p.structural.c4 == 0.0);
}

TEST_CASE("eval_H closed forms") {
  const auto p = params_for(2.0, 1.0, 1.0);
  const std::array<double, 2> zero{0.0, 0.0};
  const std::array<double, 2> q{2.0, 0.0};
  CHECK(eval_H(0.0, zero, p) == 0.0);
  CHECK(eval_H(1.0, q, p) == doctest::Approx(1.0).epsilon(1e-15));
  const auto hp = eval_Hp(1.0, q, p);
  CHECK(hp[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hp[1] == 0.0);
  const auto hp0 = eval_Hp(5.0, zero, params_for(1.5, 0.7, 0.3));
  CHECK(hp0[0] == 0.0);
  CHECK(hp0[1] == 0.0);
}

TEST_CASE("eval_H against high-precision value") {
  // 40-digit reference for m = 3, p = (1, 1), beta 1.5, alpha 1, mu 0.
  const auto p = params_for(1.5, 1.0, 0.0);
  const std::array<double, 2> q{1.0, 1.0};
  CHECK(eval_H(3.0, q, p) ==
        doctest::Approx(0.3737317401127620191249446561).epsilon(1e-15));
  const auto hp = eval_Hp(3.0, q, p);
  CHECK(hp[0] == doctest::Approx(0.2802988050845715143437084921).epsilon(1e-15));
  CHECK(hp[1] == doctest::Approx(hp[0]).epsilon(1e-15));
}

TEST_CASE("eval_H random sample against long double oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> beta_d(1.05, 2.0), alpha_d(0.05, 3.0),
      mu_d(0.0, 2.0), m_d(1e-3, 10.0), p_d(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double beta = beta_d(rng), alpha = alpha_d(rng), mu = mu_d(rng);
    const double m = m_d(rng);
    const std::array<double, 2> q{p_d(rng), p_d(rng)};
    const auto p = params_for(beta, alpha, mu);
    const long double ref = H_oracle(m, q[0], q[1], beta, alpha, mu);
    CHECK(static_cast<long double>(eval_H(m, q, p)) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
  }
}

TEST_CASE("eval_Hp matches a central difference of eval_H") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> m_d(0.1, 5.0), p_d(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = params_for(1.3 + 0.007 * trial, 0.8, 0.5);
    const double m = m_d(rng);
    std::array<double, 2> q{p_d(rng), p_d(rng)};
    const auto hp = eval_Hp(m, q, p);
    for (std::size_t i = 0; i < 2; ++i) {
      const double step = 1e-6;
      auto qp = q, qm = q;
      qp[i] += step;
      qm[i] -= step;
      const double fd = (eval_H(m, qp, p) - eval_H(m, qm, p)) / (2 * step);
      CHECK(hp[i] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("Euler identity and convexity gap") {
  const auto p = params_for(1.5, 0.5, 0.2);
  const std::array<double, 2> q{1.0, 1.0};
  const double H = eval_H(1.0, q, p);
  const auto hp = eval_Hp(1.0, q, p);
  const double hpp = hp[0] * q[0] + hp[1] * q[1];
  CHECK(hpp == doctest::Approx(1.5 * H).epsilon(1e-14));
  const double expected =
      std::pow(std::sqrt(2.0), 1.5) / std::pow(1.2, 0.5) / p.beta_conjugate();
  CHECK(hpp - H == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("sampled structural inequalities") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> m_d(0.0, 20.0), p_d(-10.0, 10.0);
  for (double beta : {1.2, 1.5, 2.0}) {
    const auto p = params_for(beta, 0.9, 0.4);
    for (int trial = 0; trial < 200; ++trial) {
      const double m = m_d(rng);
      const std::array<double, 2> q{p_d(rng), p_d(rng)};
      const std::array<double, 2> z{0.0, 0.0};
      const double H = eval_H(m, q, p);
      const auto hp = eval_Hp(m, q, p);
      const double pn = std::hypot(q[0], q[1]);
      const double hn = std::hypot(hp[0], hp[1]);
      const double d = std::pow(m + p.mu, p.alpha);
      CHECK(eval_H(m, z, p) == 0.0);
      CHECK(hp[0] * q[0] + hp[1] * q[1] - H >= 0.0);
      // Coercivity, growth and the sigma-convexity bound with sharp constants.
      CHECK(H >= p.structural.c0 * std::pow(pn, beta) / d * (1 - 1e-14));
      CHECK(hn <= p.structural.c2 * (1 + std::pow(pn, beta - 1) / d) * (1 + 1e-14));
      CHECK(hp[0] * q[0] + hp[1] * q[1] >=
            (1 + p.structural.sigma) * H * (1 - 1e-14));
    }
  }
}

TEST_CASE("singular evaluation rejected") {
  const auto p = params_for(2.0, 1.0, 0.0);
  const std::array<double, 1> q{1.0};
  const std::array<double, 1> zero{0.0};
  CHECK_THROWS_AS(eval_H(0.0, q, p), SingularEvaluation);
  CHECK_THROWS_AS(eval_Hp(0.0, q, p), SingularEvaluation);
  CHECK(eval_H(0.0, zero, p) == 0.0);
  CHECK(eval_H(2.0, q, p) == doctest::Approx(0.25));
}

TEST_CASE("singular kernels use the floor and the support indicator") {
  auto p = params_for(2.0, 1.0, 0.0);
  p.m_floor = 1e-6;
  CHECK(support_indicator(1e-7, p) == 0.0);
  CHECK(support_indicator(1e-5, p) == 1.0);
  CHECK(hamiltonian_sq(1e-7, 4.0, p) == 0.0);
  CHECK(congestion_denominator(1e-7, p) == doctest::Approx(1e-6));
  CHECK(hp_scale_sq(2.0, 4.0, p) == doctest::Approx(0.5));
}

TEST_CASE("check_structure examples") {
  auto r = check_structure(params_for(2.0, 2.0, 1.0));
  CHECK(r.valid_ranges);
  CHECK(r.uniqueness_threshold == 2.0);
  CHECK(r.uniqueness_ok);

  r = check_structure(params_for(1.5, 1.4, 1.0));
  CHECK(r.valid_ranges);
  CHECK(r.uniqueness_threshold == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(r.uniqueness_ok);

  r = check_structure(params_for(2.5, 1.0, 1.0));
  CHECK_FALSE(r.valid_ranges);
  CHECK_FALSE(r.violations.empty());

  // Strict bound in the singular quadratic case.
  CHECK_FALSE(check_structure(params_for(2.0, 2.0, 0.0)).uniqueness_ok);
  CHECK(check_structure(params_for(2.0, 1.999, 0.0)).uniqueness_ok);

  CHECK_FALSE(check_structure(params_for(1.0, 0.5, 1.0)).valid_ranges);
  CHECK_FALSE(check_structure(params_for(1.5, 0.0, 1.0)).valid_ranges);
  CHECK_FALSE(check_structure(params_for(1.5, 0.5, -1.0)).valid_ranges);
}

TEST_CASE("uniqueness flag is exactly the threshold predicate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> beta_d(1.01, 2.0), alpha_d(0.01, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double beta = beta_d(rng), alpha = alpha_d(rng);
    const auto r = check_structure(params_for(beta, alpha, 0.5));
    CHECK(r.uniqueness_ok == (alpha <= 4.0 * (beta - 1.0) / beta));
  }
  // alpha <= beta whenever both ranges hold.
  for (int trial = 0; trial < 1000; ++trial) {
    const double beta = beta_d(rng);
    CHECK(4.0 * (beta - 1.0) / beta <= beta + 1e-15);
  }
}

TEST_CASE("hp2 inequality on the log grid") {
  for (double beta : {1.2, 1.5, 2.0}) {
    for (double alpha : {0.3, 0.9 * 4 * (beta - 1) / beta}) {
      for (double mu : {0.0, 0.1, 1.0}) {
        const auto p = params_for(beta, alpha, mu);
        CHECK_MESSAGE(hp2_sampled(p), "beta " << beta << " alpha " << alpha
                                              << " mu " << mu);
      }
    }
  }
  CHECK(check_structure(params_for(1.5, 0.6, 1.0)).hp2_sampled_ok);
}

TEST_CASE("Legendre residual") {
  const std::array<double, 2> q1{1.0, 0.0};
  CHECK(legendre_residual(1.0, q1, params_for(2.0, 1.0, 0.0)) <= 1e-6);
  const std::array<double, 2> zero{0.0, 0.0};
  CHECK(legendre_residual(0.5, zero, params_for(2.0, 1.0, 1.0)) == 0.0);
  const std::array<double, 2> q2{1.0, 1.0};
  CHECK(legendre_residual(2.0, q2, params_for(1.5, 1.0, 0.1)) <= 1e-5);

  // A box that cannot contain the maximizer |w*| = (|p|/(m+mu)^gamma)^(beta-1).
  GridSearchSpec small;
  small.radius = 0.1;
  const std::array<double, 1> big{10.0};
  CHECK_THROWS_AS(legendre_residual(1.0, big, params_for(2.0, 1.0, 1.0), small),
                  SearchBoxTooSmall);
}

TEST_CASE("Legendre residual on random samples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> m_d(0.05, 5.0), p_d(-3.0, 3.0);
  for (double beta : {1.5, 2.0}) {
    for (double mu : {0.0, 0.5}) {
      const auto p = params_for(beta, 0.8 * 4 * (beta - 1) / beta, mu);
      for (int trial = 0; trial < 10; ++trial) {
        const std::array<double, 2> q{p_d(rng), p_d(rng)};
        CHECK(legendre_residual(m_d(rng), q, p) <= 1e-5);
      }
    }
  }
}

TEST_CASE("monotone probe") {
  const auto c = linear_coupling();
  const auto p = base_params(c);
  const std::array<double, 1> q{1.0}, r{1.0}, zero{0.0};
  const auto probe = h_monotone_probe(1.0, 1.0, q, r, p, c);
  CHECK(probe.monotone);
  CHECK(probe.min_slope > 0.0);
  CHECK_THROWS_AS(h_monotone_probe(1.0, 0.0, q, zero, p, c),
                  DegenerateDirection);
}

TEST_CASE("monotone probe finds a witness above the range") {
  const auto c = linear_coupling();
  const auto p = ModelParams::make(0.5, 2.0, 3.0, 0.01, 1.0, c);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> m_d(0.0, 5.0), z_d(-1.0, 1.0),
      p_d(-10.0, 10.0);
  bool found = false;
  for (int trial = 0; trial < 5000 && !found; ++trial) {
    const double m = m_d(rng);
    double z = z_d(rng);
    if (m + z < 0.0) z = -m;
    const std::array<double, 1> q{p_d(rng)}, r{p_d(rng)};
    if (!h_monotone_probe(m, z, q, r, p, c).monotone) {
      found = true;
      MESSAGE("witness m=" << m << " z=" << z << " p=" << q[0] << " r=" << r[0]);
    }
  }
  CHECK(found);
}

TEST_CASE("E functional sign") {
  const auto c = linear_coupling();
  const std::array<double, 2> q{0.3, -1.2};
  CHECK(e_functional(0.7, q, 0.7, q, base_params(c), c) == 0.0);
  const auto good = sample_e_functional(base_params(c, 1.5, 1.0, 0.5), c,
                                        10000, 42);
  CHECK(good.min_value >= -1e-10);
  const auto bad = sample_e_functional(base_params(c, 2.0, 3.0, 0.01), c, 10000,
                                       42);
  CHECK(bad.min_value < 0.0);
}

TEST_CASE("coupling tables") {
  const auto c = CouplingSpec::tabulated({{0.0, 1.0, 2.0}, {0.0, 1.0, 3.0}},
                                         {{0.0, 1.0}, {0.5, 0.5}});
  CHECK(c.F(0.5) == doctest::Approx(0.5));
  CHECK(c.F(1.5) == doctest::Approx(2.0));
  CHECK(c.F(3.0) == doctest::Approx(5.0));
  CHECK(c.G(10.0) == doctest::Approx(0.5));
  CHECK(c.lower_bound() == 0.0);
  CHECK_THROWS(CouplingSpec::tabulated({{0.0, 1.0}, {1.0, 0.0}},
                                       {{0.0, 1.0}, {0.0, 1.0}}));
  CHECK_THROWS(CouplingSpec::power(-1.0, 1.0, 0.0, 1.0, 1.0, 0.0));
}

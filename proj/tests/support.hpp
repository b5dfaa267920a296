#pragma once

// Shared fixtures for the test binaries.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "mfgc/coupler.hpp"

namespace mfgc::test {

inline CouplingSpec linear_coupling() {
  return CouplingSpec::power(1.0, 1.0, 0.0, 1.0, 1.0, 0.0);
}

inline CouplingSpec zero_coupling() {
  return CouplingSpec::power(0.0, 1.0, 0.0, 0.0, 1.0, 0.0);
}

inline ModelParams base_params(const CouplingSpec& c, double beta = 2.0,
                               double alpha = 1.0, double mu = 1.0) {
  return ModelParams::make(0.5, beta, alpha, mu, 1.0, c);
}

/// m0 = 1 + 0.5 cos(2 pi x) normalized, F(m) = G(m) = m, beta 2, alpha 1.
inline MFGProblem reference_problem(int n, int nt) {
  const GridSpec g(1, n, nt, 1.0);
  const auto c = linear_coupling();
  return MFGProblem{g, base_params(c), c, cosine_bump(g, 0.5)};
}

inline MFGProblem constant_problem(int n, int nt) {
  const GridSpec g(1, n, nt, 1.0);
  const auto c = linear_coupling();
  return MFGProblem{g, base_params(c), c, uniform_density(g)};
}

inline ScalarField random_field(const GridSpec& g, std::mt19937_64& rng,
                                double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ScalarField f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("MFGC_TEST_TMP");
  const std::filesystem::path root =
      env ? std::filesystem::path(env)
          : std::filesystem::temp_directory_path() / "mfgc_tests";
  const auto dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mfgc::test

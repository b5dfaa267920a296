#pragma once

// Flat `key = value` run configuration with `#` comments.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfgc/coupler.hpp"
#include "mfgc/errors.hpp"

namespace mfgc::cli {

/// Parse failure; `line` is 1-based, 0 when the error is not tied to a line.
class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// uniform | cosine_bump(amplitude) | file(path)
struct DensitySpec {
  enum class Kind { uniform, cosine_bump, file };
  Kind kind = Kind::uniform;
  double amplitude = 0.0;
  std::filesystem::path path;

  static DensitySpec parse(const std::string& text,
                           const std::filesystem::path& base_dir);
  ScalarField build(const GridSpec& grid) const;
};

struct RunConfig {
  // model
  double nu = 0.5;
  double beta = 2.0;
  double alpha = 1.0;
  double mu = 1.0;
  double T = 1.0;
  double m_floor = 1e-10;
  // coupling, power family unless tables are given
  double F_coef = 1.0, F_exp = 1.0, F_offset = 0.0;
  double G_coef = 1.0, G_exp = 1.0, G_offset = 0.0;
  std::vector<double> F_table_m, F_table_value, G_table_m, G_table_value;
  // grid
  int dim = 1;
  int n = 32;
  int nt = 32;
  // fixed point
  double damping = 0.5;
  double fp_tol = 1e-8;
  int max_outer_iter = 500;
  bool adaptive_damping = false;
  double min_damping = 1e-3;
  std::optional<DensitySpec> init_m;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double linear_tol = 1e-12;
  // data and regularization
  DensitySpec m0;
  double epsilon = 0.0;
  // continuation; active when either list is given
  std::vector<double> epsilons;
  std::vector<double> mus;
  bool warm_start = true;
  bool allow_singular = false;

  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "out";

  bool continuation() const { return !epsilons.empty() || !mus.empty(); }

  CouplingSpec coupling() const;
  ModelParams params() const;
  GridSpec grid() const;
  FixedPointOptions fixed_point() const;
  ContinuationSchedule schedule() const;
  MFGProblem problem() const;
};

RunConfig parse_config(const std::string& text,
                       const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mfgc::cli

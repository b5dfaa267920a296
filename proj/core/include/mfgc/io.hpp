#pragma once

// File formats: field CSV (`t,x[,y],value`, 17 significant digits), the
// solution bundle directory (u.csv, m.csv, policy.csv, meta.json) and flat
// JSON reports.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "mfgc/coupler.hpp"
#include "mfgc/errors.hpp"

namespace mfgc {

/// Raised for unreadable, missing or malformed files.
class IoError : public Error {
 public:
  using Error::Error;
};

void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& f);
/// Single frame written at time t.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f,
                     double t = 0.0);

SpaceTimeField read_spacetime_csv(const std::filesystem::path& path,
                                  const GridSpec& grid);
/// Reads a one-frame CSV; the `t` column is ignored.
ScalarField read_scalar_csv(const std::filesystem::path& path,
                            const GridSpec& grid);

struct Bundle {
  MFGSolution solution;
  /// Parameters as configured; solution.meta.mu holds the mu actually used.
  ModelParams params;
  CouplingSpec coupling;
  std::uint64_t seed = 42;
};

/// Writes u.csv, m.csv, policy.csv (net drift along x; policy_y.csv holds
/// the y component in 2-D) and meta.json into `dir`, creating it if needed.
void write_bundle(const std::filesystem::path& dir, const Bundle& bundle);
/// Loads a bundle; the policy is recomputed from (u, m).
Bundle read_bundle(const std::filesystem::path& dir);

/// Flat JSON object of numbers.
void write_flat_json(const std::filesystem::path& path,
                     const std::map<std::string, double>& values);
std::map<std::string, double> read_flat_json_numbers(
    const std::filesystem::path& path);

}  // namespace mfgc

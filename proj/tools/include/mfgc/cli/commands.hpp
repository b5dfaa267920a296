#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfgc/cli/config.hpp"

namespace mfgc::cli {

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_structural = 1,
  exit_config = 2,
  exit_budget = 3,
  exit_solver = 4,
  exit_mismatch = 5,
};

int cmd_check(const RunConfig& config, std::ostream& out);
int cmd_solve(const RunConfig& config, std::ostream& out);
/// Report goes to `report_path`, or `<bundleA>/report.json` when empty.
int cmd_diagnose(const std::filesystem::path& bundleA,
                 const std::optional<std::filesystem::path>& bundleB,
                 const std::filesystem::path& report_path, std::ostream& out);

struct StudyRow {
  int n = 0;
  int nt = 0;
  double energy_residual = 0.0;
  double l1_gap = 0.0;
};

/// Level l solves on (n 2^l, nt 2^l); l1_gap compares each level with the
/// finest one restricted to the coarse grid.
std::vector<StudyRow> run_study(const RunConfig& config, int levels);
int cmd_study(const RunConfig& config, int levels,
              const std::filesystem::path& table_path, std::ostream& out);

/// Entry point shared by the executable and the tests; args[0] is the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mfgc::cli

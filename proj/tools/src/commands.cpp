#include "mfgc/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "mfgc/diagnostics.hpp"
#include "mfgc/io.hpp"

namespace mfgc::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_table(std::ostream& out, const std::map<std::string, double>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << k << num(v)
        << '\n';
  }
}

void report_structure(std::ostream& out, const StructureReport& r) {
  out << "valid_ranges: " << (r.valid_ranges ? "true" : "false") << '\n'
      << "uniqueness_threshold: " << num(r.uniqueness_threshold) << '\n'
      << "uniqueness_ok: " << (r.uniqueness_ok ? "true" : "false") << '\n'
      << "hp2_sampled_ok: " << (r.hp2_sampled_ok ? "true" : "false") << '\n';
  for (const auto& v : r.violations) out << "violation: " << v << '\n';
}

void print_solve_summary(std::ostream& out, const MFGSolution& sol) {
  out << "epsilon " << num(sol.meta.epsilon) << ", mu " << num(sol.meta.mu)
      << ": " << (sol.meta.converged ? "converged" : "NOT converged")
      << " after " << sol.meta.outer_iters << " outer iterations";
  if (!sol.meta.increments.empty()) {
    out << ", last increment " << num(sol.meta.increments.back());
  }
  out << '\n';
}

// Block-averages `fine` in space and samples it in time onto `coarse`.
SpaceTimeField restrict_to(const SpaceTimeField& fine, const GridSpec& coarse) {
  const GridSpec& g = fine.grid();
  const int r = g.n / coarse.n;
  const int rt = g.nt / coarse.nt;
  SpaceTimeField out(coarse);
  const int rows = coarse.dim == 2 ? coarse.n : 1;
  const int sub_rows = coarse.dim == 2 ? r : 1;
  const double weight = 1.0 / (static_cast<double>(r) * sub_rows);
  for (std::size_t k = 0; k < out.levels(); ++k) {
    const auto& src = fine[k * static_cast<std::size_t>(rt)];
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < coarse.n; ++i) {
        double acc = 0.0;
        for (int b = 0; b < sub_rows; ++b) {
          for (int a = 0; a < r; ++a) acc += src.at(i * r + a, j * sub_rows + b);
        }
        out[k].at(i, j) = acc * weight;
      }
    }
  }
  return out;
}

}  // namespace

int cmd_check(const RunConfig& config, std::ostream& out) {
  const StructureReport r = check_structure(config.params());
  report_structure(out, r);
  return r.valid_ranges ? exit_ok : exit_structural;
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
  const ModelParams params = config.params();
  const StructureReport structure = check_structure(params);
  if (!structure.valid_ranges) {
    report_structure(out, structure);
    return exit_structural;
  }
  const MFGProblem problem = config.problem();
  const FixedPointOptions opts = config.fixed_point();

  if (!config.continuation()) {
    const MFGSolution sol = solve_mfg(problem, opts, config.epsilon);
    write_bundle(config.output_dir,
                 Bundle{sol, params, problem.coupling, config.seed});
    print_solve_summary(out, sol);
    out << "bundle written to " << config.output_dir.string() << '\n';
    return sol.meta.converged ? exit_ok : exit_budget;
  }

  const ContinuationSchedule schedule = config.schedule();
  schedule.validate();
  const ContinuationResult result =
      solve_with_continuation(problem, opts, schedule);
  fs::create_directories(config.output_dir);
  for (std::size_t j = 0; j < result.solutions.size(); ++j) {
    const auto& sol = result.solutions[j];
    print_solve_summary(out, sol);
    write_bundle(config.output_dir / ("rung_" + std::to_string(j)),
                 Bundle{sol, params, problem.coupling, config.seed});
  }
  if (!result.solutions.empty()) {
    write_bundle(config.output_dir, Bundle{result.solutions.back(), params,
                                           problem.coupling, config.seed});
  }
  {
    std::ofstream cauchy(config.output_dir / "cauchy.csv");
    if (!cauchy) throw IoError("cannot write cauchy.csv");
    cauchy << "rung,epsilon,mu,m_gap,u_gap\n";
    for (std::size_t j = 0; j < result.cauchy_table.size(); ++j) {
      const auto& next = result.solutions[j + 1].meta;
      cauchy << j + 1 << ',' << full(next.epsilon) << ',' << full(next.mu)
             << ',' << full(result.cauchy_table[j].m_gap) << ','
             << full(result.cauchy_table[j].u_gap) << '\n';
    }
  }
  out << "bundles written to " << config.output_dir.string() << '\n';
  if (!result.failure) return exit_ok;
  out << "continuation stopped: " << *result.failure << '\n';
  if (!result.solutions.empty() && !result.solutions.back().meta.converged) {
    return exit_budget;
  }
  return exit_solver;
}

int cmd_diagnose(const fs::path& bundleA, const std::optional<fs::path>& bundleB,
                 const fs::path& report_path, std::ostream& out) {
  const Bundle a = read_bundle(bundleA);
  const ModelParams params = effective_params(a.params, a.solution.meta);
  const DiagnosticsReport report =
      apriori_report(a.solution, params, a.coupling);
  std::map<std::string, double> values = report.as_map();

  if (bundleB) {
    const Bundle b = read_bundle(*bundleB);
    require_same_grid(a.solution.grid(), b.solution.grid(), "diagnose");
    const ModelParams pb = effective_params(b.params, b.solution.meta);
    if (pb.nu != params.nu || pb.beta != params.beta ||
        pb.alpha != params.alpha || pb.mu != params.mu) {
      throw GridMismatch("bundles were computed with different parameters");
    }
    values["crossed_gap_AB"] =
        crossed_energy_gap(a.solution, b.solution, params, a.coupling);
    values["crossed_gap_BA"] =
        crossed_energy_gap(b.solution, a.solution, params, a.coupling);
    const UniquenessGap ug =
        uniqueness_gap(a.solution, b.solution, params, a.coupling);
    values["uniqueness_gap"] = ug.gap;
    values["E_min_sampled"] = ug.E_min_sampled;
    values["l1_m_gap"] = l1_distance(a.solution.m, b.solution.m);
    values["l1_u_gap"] = l1_distance(a.solution.u, b.solution.u);
  }

  const fs::path target =
      report_path.empty() ? bundleA / "report.json" : report_path;
  write_flat_json(target, values);
  print_table(out, values);
  out << "report written to " << target.string() << '\n';
  if (!report.clean()) out << "warning: diagnostic flags raised\n";
  return exit_ok;
}

std::vector<StudyRow> run_study(const RunConfig& config, int levels) {
  if (levels < 2) throw ConfigError("study needs at least 2 levels");
  std::vector<MFGSolution> sols;
  std::vector<StudyRow> rows;
  for (int l = 0; l < levels; ++l) {
    RunConfig c = config;
    c.n = config.n << l;
    c.nt = config.nt << l;
    const MFGProblem problem = c.problem();
    MFGSolution sol = solve_mfg(problem, c.fixed_point(), c.epsilon);
    if (!sol.meta.converged) {
      throw NewtonDiverged("study level " + std::to_string(l) +
                           " did not converge");
    }
    StudyRow row;
    row.n = c.n;
    row.nt = c.nt;
    row.energy_residual =
        energy_identity_residual(sol, problem.params, problem.coupling);
    rows.push_back(row);
    sols.push_back(std::move(sol));
  }
  const SpaceTimeField& finest = sols.back().m;
  for (std::size_t l = 0; l < rows.size(); ++l) {
    rows[l].l1_gap = l1_distance(restrict_to(finest, sols[l].grid()), sols[l].m);
  }
  return rows;
}

int cmd_study(const RunConfig& config, int levels, const fs::path& table_path,
              std::ostream& out) {
  const auto structure = check_structure(config.params());
  if (!structure.valid_ranges) {
    report_structure(out, structure);
    return exit_structural;
  }
  const auto rows = run_study(config, levels);
  const fs::path target =
      table_path.empty() ? config.output_dir / "study.csv" : table_path;
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream csv(target);
  if (!csv) throw IoError("cannot write " + target.string());
  csv << "n,nt,energy_residual,l1_gap\n";
  out << "n      nt     energy_residual  l1_gap\n";
  bool res_decreasing = true;
  bool gap_decreasing = true;
  for (std::size_t l = 0; l < rows.size(); ++l) {
    const auto& r = rows[l];
    csv << r.n << ',' << r.nt << ',' << full(r.energy_residual) << ','
        << full(r.l1_gap) << '\n';
    out << std::left << std::setw(7) << r.n << std::setw(7) << r.nt
        << std::setw(17) << num(r.energy_residual) << num(r.l1_gap) << '\n';
    if (l > 0) {
      res_decreasing = res_decreasing &&
                       r.energy_residual < rows[l - 1].energy_residual;
      // The finest row compares with itself and is excluded.
      if (l + 1 < rows.size()) {
        gap_decreasing = gap_decreasing && r.l1_gap < rows[l - 1].l1_gap;
      }
    }
  }
  out << "energy_residual decreasing: " << (res_decreasing ? "yes" : "no")
      << '\n'
      << "l1_gap decreasing: " << (gap_decreasing ? "yes" : "no") << '\n'
      << "table written to " << target.string() << '\n';
  return exit_ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Mean field games with congestion: solver and checks"};
  app.require_subcommand(1);

  std::string config_path;
  auto* check = app.add_subcommand("check", "validate parameter ranges");
  check->add_option("config", config_path, "run configuration")->required();

  auto* solve = app.add_subcommand("solve", "solve and write a bundle");
  solve->add_option("config", config_path, "run configuration")->required();

  std::string bundle_a;
  std::string bundle_b;
  std::string report;
  auto* diagnose = app.add_subcommand("diagnose", "diagnostics of bundles");
  diagnose->add_option("bundleA", bundle_a, "solution bundle")->required();
  diagnose->add_option("bundleB", bundle_b, "second bundle");
  diagnose->add_option("-o,--output", report, "report.json path");

  int levels = 3;
  std::string table;
  auto* study = app.add_subcommand("study", "grid refinement study");
  study->add_option("config", config_path, "run configuration")->required();
  study->add_option("-l,--levels", levels, "number of levels");
  study->add_option("-o,--output", table, "table CSV path");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*check) return cmd_check(load_config(config_path), out);
    if (*solve) return cmd_solve(load_config(config_path), out);
    if (*diagnose) {
      std::optional<fs::path> b;
      if (!bundle_b.empty()) b = bundle_b;
      return cmd_diagnose(bundle_a, b, report, out);
    }
    if (*study) {
      if (levels < 2) {
        err << "error: --levels must be at least 2\n";
        return exit_config;
      }
      return cmd_study(load_config(config_path), levels, table, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return exit_config;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return exit_config;
  } catch (const GridMismatch& e) {
    err << "mismatch: " << e.what() << '\n';
    return exit_mismatch;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return exit_solver;
  }
  return exit_config;
}

}  // namespace mfgc::cli

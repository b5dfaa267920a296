#include "mfgc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace mfgc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string header(const GridSpec& g) {
  return g.dim == 2 ? "t,x,y,value" : "t,x,value";
}

void write_frame(std::ostream& os, const ScalarField& f, double t) {
  const GridSpec& g = f.grid();
  const int rows = g.dim == 2 ? g.n : 1;
  const std::string ts = fmt17(t);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < g.n; ++i) {
      os << ts << ',' << fmt17(g.center(i));
      if (g.dim == 2) os << ',' << fmt17(g.center(j));
      os << ',' << fmt17(f.at(i, j)) << '\n';
    }
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

// Reads every `value` column entry in row order after validating the header.
std::vector<double> read_values(const fs::path& path, const GridSpec& grid) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw IoError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header(grid)) {
    throw IoError(path.string() + ": expected header '" + header(grid) +
                  "', found '" + line + "'");
  }
  const std::size_t columns = grid.dim == 2 ? 4 : 3;
  std::vector<double> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t pos = 0;
    std::size_t col = 0;
    double value = 0.0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      ++col;
      if (col == columns) {
        const std::string cell = line.substr(pos, next - pos);
        char* end = nullptr;
        value = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str()) {
          throw IoError(path.string() + ":" + std::to_string(lineno) +
                        ": bad number '" + cell + "'");
        }
      }
      pos = next + 1;
    }
    if (col != columns) {
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": expected " + std::to_string(columns) + " columns");
    }
    out.push_back(value);
  }
  return out;
}

json coupling_to_json(const CouplingSpec& c) {
  json j;
  if (c.family() == CouplingSpec::Family::tabulated) {
    j["coupling"] = "tabulated";
    j["F_table_m"] = c.tableF().m;
    j["F_table_value"] = c.tableF().value;
    j["G_table_m"] = c.tableG().m;
    j["G_table_value"] = c.tableG().value;
  } else {
    j["coupling"] = "power";
    j["F_coef"] = c.cF();
    j["F_exp"] = c.qF();
    j["F_offset"] = c.offsetF();
    j["G_coef"] = c.cG();
    j["G_exp"] = c.qG();
    j["G_offset"] = c.offsetG();
  }
  return j;
}

CouplingSpec coupling_from_json(const json& j) {
  if (j.value("coupling", std::string("power")) == "tabulated") {
    CouplingTable F{j.at("F_table_m").get<std::vector<double>>(),
                    j.at("F_table_value").get<std::vector<double>>()};
    CouplingTable G{j.at("G_table_m").get<std::vector<double>>(),
                    j.at("G_table_value").get<std::vector<double>>()};
    return CouplingSpec::tabulated(std::move(F), std::move(G));
  }
  return CouplingSpec::power(j.at("F_coef"), j.at("F_exp"), j.at("F_offset"),
                             j.at("G_coef"), j.at("G_exp"), j.at("G_offset"));
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace

void write_field_csv(const fs::path& path, const SpaceTimeField& f) {
  auto os = open_out(path);
  os << header(f.grid()) << '\n';
  for (std::size_t k = 0; k < f.levels(); ++k) {
    write_frame(os, f[k], f.grid().time(static_cast<int>(k)));
  }
}

void write_field_csv(const fs::path& path, const ScalarField& f, double t) {
  auto os = open_out(path);
  os << header(f.grid()) << '\n';
  write_frame(os, f, t);
}

SpaceTimeField read_spacetime_csv(const fs::path& path, const GridSpec& grid) {
  const auto values = read_values(path, grid);
  const std::size_t cells = grid.cells();
  const std::size_t levels = static_cast<std::size_t>(grid.nt) + 1;
  if (values.size() != cells * levels) {
    throw IoError(path.string() + ": expected " + std::to_string(cells * levels) +
                  " rows, found " + std::to_string(values.size()));
  }
  SpaceTimeField out(grid);
  for (std::size_t k = 0; k < levels; ++k) {
    for (std::size_t i = 0; i < cells; ++i) out[k][i] = values[k * cells + i];
  }
  return out;
}

ScalarField read_scalar_csv(const fs::path& path, const GridSpec& grid) {
  auto values = read_values(path, grid);
  if (values.size() != grid.cells()) {
    throw IoError(path.string() + ": expected " + std::to_string(grid.cells()) +
                  " rows, found " + std::to_string(values.size()));
  }
  return ScalarField(grid, std::move(values));
}

void write_bundle(const fs::path& dir, const Bundle& bundle) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const MFGSolution& sol = bundle.solution;
  const GridSpec& g = sol.grid();
  write_field_csv(dir / "u.csv", sol.u);
  write_field_csv(dir / "m.csv", sol.m);
  for (int axis = 0; axis < g.dim; ++axis) {
    SpaceTimeField drift(g);
    for (std::size_t k = 0; k < sol.policy.size() && k < drift.levels(); ++k) {
      drift[k] = sol.policy[k].drift(axis);
    }
    write_field_csv(dir / (axis == 0 ? "policy.csv" : "policy_y.csv"), drift);
  }

  json meta = coupling_to_json(bundle.coupling);
  meta["epsilon"] = sol.meta.epsilon;
  meta["mu"] = sol.meta.mu;
  meta["outer_iters"] = sol.meta.outer_iters;
  meta["increments"] = sol.meta.increments;
  meta["newton_residual_max"] = sol.meta.newton_residual_max;
  meta["wall_time_seconds"] = sol.meta.wall_time_seconds;
  meta["converged"] = sol.meta.converged;
  meta["seed"] = bundle.seed;
  meta["dim"] = g.dim;
  meta["n"] = g.n;
  meta["nt"] = g.nt;
  meta["T"] = g.T;
  meta["nu"] = bundle.params.nu;
  meta["beta"] = bundle.params.beta;
  meta["alpha"] = bundle.params.alpha;
  meta["mu_configured"] = bundle.params.mu;
  meta["m_floor"] = bundle.params.m_floor;
  auto os = open_out(dir / "meta.json");
  os << meta.dump(2) << '\n';
}

Bundle read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("bundle directory " + dir.string() + " does not exist");
  }
  const json meta = read_json(dir / "meta.json");
  Bundle b;
  try {
    const GridSpec grid(meta.at("dim"), meta.at("n"), meta.at("nt"),
                        meta.at("T"));
    b.coupling = coupling_from_json(meta);
    b.params = ModelParams::make(meta.at("nu"), meta.at("beta"),
                                 meta.at("alpha"), meta.at("mu_configured"),
                                 grid.T, b.coupling);
    b.params.m_floor = meta.value("m_floor", 1e-10);
    b.seed = meta.value("seed", std::uint64_t{42});
    auto& sol = b.solution;
    sol.meta.epsilon = meta.at("epsilon");
    sol.meta.mu = meta.at("mu");
    sol.meta.outer_iters = meta.at("outer_iters");
    sol.meta.increments = meta.at("increments").get<std::vector<double>>();
    sol.meta.newton_residual_max = meta.at("newton_residual_max");
    sol.meta.wall_time_seconds = meta.value("wall_time_seconds", 0.0);
    sol.meta.converged = meta.value("converged", true);
    sol.u = read_spacetime_csv(dir / "u.csv", grid);
    sol.m = read_spacetime_csv(dir / "m.csv", grid);
    sol.policy = recompute_policy(sol.u, sol.m,
                                  effective_params(b.params, sol.meta),
                                  sol.meta.epsilon);
  } catch (const json::exception& e) {
    throw IoError((dir / "meta.json").string() + ": " + e.what());
  }
  return b;
}

void write_flat_json(const fs::path& path,
                     const std::map<std::string, double>& values) {
  json j = json::object();
  for (const auto& [k, v] : values) j[k] = v;
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

std::map<std::string, double> read_flat_json_numbers(const fs::path& path) {
  const json j = read_json(path);
  if (!j.is_object()) throw IoError(path.string() + ": expected a JSON object");
  std::map<std::string, double> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_number()) out[it.key()] = it->get<double>();
  }
  return out;
}

}  // namespace mfgc

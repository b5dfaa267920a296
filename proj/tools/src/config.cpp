#include "mfgc/cli/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mfgc/io.hpp"

namespace mfgc::cli {

namespace fs = std::filesystem;

ConfigParseError::ConfigParseError(std::size_t line, const std::string& what)
    : ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + what
                           : what),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw std::invalid_argument("expected a list of numbers");
  return out;
}

// Parses `name(arg)` and returns arg, or nullopt when `text` has another form.
std::optional<std::string> call_argument(const std::string& text,
                                         const std::string& name) {
  if (text.rfind(name + "(", 0) != 0 || text.back() != ')') return std::nullopt;
  return trim(text.substr(name.size() + 1, text.size() - name.size() - 2));
}

}  // namespace

DensitySpec DensitySpec::parse(const std::string& text,
                               const fs::path& base_dir) {
  DensitySpec d;
  if (text == "uniform") return d;
  if (auto arg = call_argument(text, "cosine_bump")) {
    d.kind = Kind::cosine_bump;
    d.amplitude = to_double(*arg);
    return d;
  }
  if (auto arg = call_argument(text, "file")) {
    d.kind = Kind::file;
    d.path = fs::path(*arg);
    if (d.path.is_relative()) d.path = base_dir / d.path;
    return d;
  }
  throw std::invalid_argument(
      "expected uniform, cosine_bump(a) or file(path), got '" + text + "'");
}

ScalarField DensitySpec::build(const GridSpec& grid) const {
  switch (kind) {
    case Kind::cosine_bump:
      return cosine_bump(grid, amplitude);
    case Kind::file:
      return normalize_mass(read_scalar_csv(path, grid));
    case Kind::uniform:
      break;
  }
  return uniform_density(grid);
}

CouplingSpec RunConfig::coupling() const {
  const bool tables = !F_table_m.empty() || !F_table_value.empty() ||
                      !G_table_m.empty() || !G_table_value.empty();
  if (tables) {
    return CouplingSpec::tabulated({F_table_m, F_table_value},
                                   {G_table_m, G_table_value});
  }
  return CouplingSpec::power(F_coef, F_exp, F_offset, G_coef, G_exp, G_offset);
}

ModelParams RunConfig::params() const {
  ModelParams p = ModelParams::make(nu, beta, alpha, mu, T, coupling());
  p.m_floor = m_floor;
  return p;
}

GridSpec RunConfig::grid() const { return GridSpec(dim, n, nt, T); }

FixedPointOptions RunConfig::fixed_point() const {
  FixedPointOptions o;
  o.damping = damping;
  o.fp_tol = fp_tol;
  o.max_outer_iter = max_outer_iter;
  o.adaptive_damping = adaptive_damping;
  o.min_damping = std::min(min_damping, damping);
  if (init_m) o.init_m = init_m->build(grid());
  o.hjb.newton_tol = newton_tol;
  o.hjb.newton_max_iter = newton_max_iter;
  o.hjb.linear_tol = linear_tol;
  o.fpk.linear_tol = linear_tol;
  return o;
}

ContinuationSchedule RunConfig::schedule() const {
  ContinuationSchedule s;
  s.epsilons = epsilons.empty() ? std::vector<double>{epsilon} : epsilons;
  s.mus = mus;
  s.warm_start = warm_start;
  s.allow_singular = allow_singular;
  return s;
}

MFGProblem RunConfig::problem() const {
  const GridSpec g = grid();
  return MFGProblem{g, params(), coupling(), m0.build(g)};
}

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  RunConfig c;
  using Setter = std::function<void(const std::string&)>;
  auto real = [](double& dst) -> Setter {
    return [&dst](const std::string& v) { dst = to_double(v); };
  };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const std::string& v) {
      const long long x = to_integer(v);
      if (x < -2147483647LL || x > 2147483647LL) {
        throw std::invalid_argument("integer out of range");
      }
      dst = static_cast<int>(x);
    };
  };
  auto flag = [](bool& dst) -> Setter {
    return [&dst](const std::string& v) { dst = to_bool(v); };
  };
  auto list = [](std::vector<double>& dst) -> Setter {
    return [&dst](const std::string& v) { dst = to_list(v); };
  };

  const std::map<std::string, Setter> setters{
      {"nu", real(c.nu)},
      {"beta", real(c.beta)},
      {"alpha", real(c.alpha)},
      {"mu", real(c.mu)},
      {"T", real(c.T)},
      {"m_floor", real(c.m_floor)},
      {"F_coef", real(c.F_coef)},
      {"F_exp", real(c.F_exp)},
      {"F_offset", real(c.F_offset)},
      {"G_coef", real(c.G_coef)},
      {"G_exp", real(c.G_exp)},
      {"G_offset", real(c.G_offset)},
      {"F_table_m", list(c.F_table_m)},
      {"F_table_value", list(c.F_table_value)},
      {"G_table_m", list(c.G_table_m)},
      {"G_table_value", list(c.G_table_value)},
      {"dim", integer(c.dim)},
      {"n", integer(c.n)},
      {"nt", integer(c.nt)},
      {"damping", real(c.damping)},
      {"fp_tol", real(c.fp_tol)},
      {"max_outer_iter", integer(c.max_outer_iter)},
      {"adaptive_damping", flag(c.adaptive_damping)},
      {"min_damping", real(c.min_damping)},
      {"init_m",
       [&](const std::string& v) { c.init_m = DensitySpec::parse(v, base_dir); }},
      {"newton_tol", real(c.newton_tol)},
      {"newton_max_iter", integer(c.newton_max_iter)},
      {"linear_tol", real(c.linear_tol)},
      {"m0", [&](const std::string& v) { c.m0 = DensitySpec::parse(v, base_dir); }},
      {"epsilon", real(c.epsilon)},
      {"epsilons", list(c.epsilons)},
      {"mus", list(c.mus)},
      {"warm_start", flag(c.warm_start)},
      {"allow_singular", flag(c.allow_singular)},
      {"seed",
       [&](const std::string& v) {
         const long long x = to_integer(v);
         if (x < 0) throw std::invalid_argument("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(x);
       }},
      {"output_dir",
       [&](const std::string& v) { c.output_dir = fs::path(v); }},
  };

  std::set<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigParseError(lineno, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigParseError(lineno, "unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigParseError(lineno, "duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigParseError(lineno, "missing value for '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigParseError(lineno, key + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty()
                                    ? fs::path(".")
                                    : path.parent_path());
}

}  // namespace mfgc::cli

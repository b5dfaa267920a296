#include "mfgc/transport.hpp"

#include <algorithm>
#include <cmath>

#include "mfgc/errors.hpp"

namespace mfgc {

namespace {

std::size_t neighbor(const GridSpec& g, std::size_t idx, int axis, int step) {
  const auto un = static_cast<std::size_t>(g.n);
  const int i = static_cast<int>(idx % un);
  const int j = static_cast<int>(idx / un);
  if (axis == 0) {
    return static_cast<std::size_t>(j) * un +
           static_cast<std::size_t>((i + step + g.n) % g.n);
  }
  return static_cast<std::size_t>((j + step + g.n) % g.n) * un +
         static_cast<std::size_t>(i);
}

}  // namespace

ScalarField truncate_density(const ScalarField& m, double eps) {
  if (eps < 0.0) throw ConfigError("epsilon must be nonnegative");
  if (eps == 0.0) return m;
  const double cap = 1.0 / eps;
  ScalarField out = m;
  for (double& v : out.values()) v = std::min(v, cap);
  return out;
}

double UpwindGradient::norm_sq(std::size_t idx) const {
  double q = 0.0;
  for (const auto& c : components) q += c[idx] * c[idx];
  return q;
}

UpwindGradient upwind_gradient(const ScalarField& u) {
  const auto d = one_sided_diffs(u);
  UpwindGradient P;
  for (std::size_t axis = 0; axis < d.plus.size(); ++axis) {
    ScalarField bm = d.minus[axis];
    ScalarField fp = d.plus[axis];
    for (double& v : bm.values()) v = std::max(v, 0.0);
    for (double& v : fp.values()) v = std::min(v, 0.0);
    P.components.push_back(std::move(bm));
    P.components.push_back(std::move(fp));
  }
  return P;
}

ScalarField DriftField::drift(int axis) const {
  const auto a = static_cast<std::size_t>(axis);
  ScalarField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -(backward[a][i] + forward[a][i]);
  }
  return out;
}

bool DriftField::operator==(const DriftField& other) const {
  if (!(grid == other.grid)) return false;
  for (std::size_t a = 0; a < backward.size(); ++a) {
    for (std::size_t i = 0; i < backward[a].size(); ++i) {
      if (backward[a][i] != other.backward[a][i]) return false;
      if (forward[a][i] != other.forward[a][i]) return false;
    }
  }
  return true;
}

DriftField upwind_drift(const ScalarField& u, const ScalarField& m_hat,
                        const ModelParams& params) {
  require_same_grid(u.grid(), m_hat.grid(), "upwind drift");
  const auto P = upwind_gradient(u);
  const GridSpec& g = u.grid();
  DriftField d{g, {}, {}};
  for (int axis = 0; axis < g.dim; ++axis) {
    d.backward.emplace_back(g);
    d.forward.emplace_back(g);
  }
  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    const double s = hp_scale_sq(m_hat[idx], P.norm_sq(idx), params);
    for (std::size_t axis = 0; axis < d.backward.size(); ++axis) {
      d.backward[axis][idx] = s * P.components[2 * axis][idx];
      d.forward[axis][idx] = s * P.components[2 * axis + 1][idx];
    }
  }
  return d;
}

ScalarField numerical_hamiltonian(const ScalarField& u, const ScalarField& m_hat,
                                  const ModelParams& params) {
  require_same_grid(u.grid(), m_hat.grid(), "numerical Hamiltonian");
  const auto P = upwind_gradient(u);
  ScalarField out(u.grid());
  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    out[idx] = hamiltonian_sq(m_hat[idx], P.norm_sq(idx), params);
  }
  return out;
}

TransportOperator::TransportOperator(DriftField drift)
    : drift_(std::move(drift)) {}

ScalarField TransportOperator::apply(const ScalarField& v) const {
  const GridSpec& g = drift_.grid;
  require_same_grid(g, v.grid(), "transport apply");
  const double inv_h = static_cast<double>(g.n);
  ScalarField out(g);
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    double acc = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      const double dm = (v[idx] - v[neighbor(g, idx, axis, -1)]) * inv_h;
      const double dp = (v[neighbor(g, idx, axis, 1)] - v[idx]) * inv_h;
      acc += drift_.backward[a][idx] * dm + drift_.forward[a][idx] * dp;
    }
    out[idx] = acc;
  }
  return out;
}

ScalarField TransportOperator::apply_transpose(const ScalarField& m) const {
  const GridSpec& g = drift_.grid;
  require_same_grid(g, m.grid(), "transport transpose");
  const double inv_h = static_cast<double>(g.n);
  ScalarField out(g);
  // Gather form: cell y receives from its own row and from rows y +- e_i
  // whose stencils reach y.
  for (std::size_t y = 0; y < m.size(); ++y) {
    double acc = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      const std::size_t up = neighbor(g, y, axis, 1);
      const std::size_t down = neighbor(g, y, axis, -1);
      const auto& b = drift_.backward[a];
      const auto& f = drift_.forward[a];
      acc += (b[y] - f[y]) * m[y] - b[up] * m[up] + f[down] * m[down];
    }
    out[y] = acc * inv_h;
  }
  return out;
}

std::vector<MatrixEntry> TransportOperator::entries() const {
  const GridSpec& g = drift_.grid;
  const double inv_h = static_cast<double>(g.n);
  std::vector<MatrixEntry> out;
  out.reserve(g.cells() * static_cast<std::size_t>(1 + 2 * g.dim));
  for (std::size_t idx = 0; idx < g.cells(); ++idx) {
    double diag = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      const double b = drift_.backward[a][idx] * inv_h;
      const double f = drift_.forward[a][idx] * inv_h;
      diag += b - f;
      out.push_back({idx, neighbor(g, idx, axis, -1), -b});
      out.push_back({idx, neighbor(g, idx, axis, 1), f});
    }
    out.push_back({idx, idx, diag});
  }
  return out;
}

}  // namespace mfgc

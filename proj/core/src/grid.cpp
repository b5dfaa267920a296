#include "mfgc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mfgc/errors.hpp"

namespace mfgc {

GridSpec::GridSpec(int dim_, int n_, int nt_, double T_)
    : dim(dim_), n(n_), nt(nt_), T(T_) {
  if (dim != 1 && dim != 2) throw ConfigError("grid dim must be 1 or 2");
  if (n < 4) throw ConfigError("grid needs n >= 4 cells per dimension");
  if (nt < 2) throw ConfigError("grid needs nt >= 2 time steps");
  if (!(T > 0.0)) throw ConfigError("time horizon T must be positive");
}

std::size_t GridSpec::cells() const {
  std::size_t c = 1;
  for (int d = 0; d < dim; ++d) c *= static_cast<std::size_t>(n);
  return c;
}

double GridSpec::cell_volume() const { return std::pow(h(), dim); }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grids differ");
}

ScalarField::ScalarField(const GridSpec& grid, double fill)
    : grid_(grid), values_(grid.cells(), fill) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cells()) {
    throw GridMismatch("field length does not match n^dim");
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

SpaceTimeField::SpaceTimeField(const GridSpec& grid, double fill)
    : grid_(grid),
      frames_(static_cast<std::size_t>(grid.nt) + 1, ScalarField(grid, fill)) {}

SpaceTimeField::SpaceTimeField(const GridSpec& grid, const ScalarField& frame)
    : grid_(grid), frames_(static_cast<std::size_t>(grid.nt) + 1, frame) {
  require_same_grid(grid, frame.grid(), "space-time field");
}

double SpaceTimeField::min() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& f : frames_) out = std::min(out, f.min());
  return out;
}

namespace {

// Neighbor index along `axis` with periodic wraparound.
struct Neighbors {
  int n;
  int dim;

  std::size_t offset(std::size_t idx, int axis, int step) const {
    const auto un = static_cast<std::size_t>(n);
    if (axis == 0) {
      const std::size_t i = idx % un;
      const std::size_t row = idx - i;
      const auto ni = static_cast<std::size_t>((static_cast<int>(i) + step + n) % n);
      return row + ni;
    }
    const std::size_t j = idx / un;
    const std::size_t i = idx % un;
    const auto nj = static_cast<std::size_t>((static_cast<int>(j) + step + n) % n);
    return nj * un + i;
  }
};

}  // namespace

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const Neighbors nb{g.n, g.dim};
  ScalarField out(g);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    double acc = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      acc += f[nb.offset(idx, axis, 1)] - 2.0 * f[idx] +
             f[nb.offset(idx, axis, -1)];
    }
    out[idx] = acc * inv_h2;
  }
  return out;
}

OneSidedDiffs one_sided_diffs(const ScalarField& u) {
  const GridSpec& g = u.grid();
  const double inv_h = static_cast<double>(g.n);
  const Neighbors nb{g.n, g.dim};
  OneSidedDiffs d;
  for (int axis = 0; axis < g.dim; ++axis) {
    ScalarField plus(g), minus(g);
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
      plus[idx] = (u[nb.offset(idx, axis, 1)] - u[idx]) * inv_h;
      minus[idx] = (u[idx] - u[nb.offset(idx, axis, -1)]) * inv_h;
    }
    d.plus.push_back(std::move(plus));
    d.minus.push_back(std::move(minus));
  }
  return d;
}

ScalarField numerical_gradient_sq(const ScalarField& u) {
  const auto d = one_sided_diffs(u);
  ScalarField out(u.grid());
  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    double q = 0.0;
    for (std::size_t axis = 0; axis < d.plus.size(); ++axis) {
      const double bm = std::max(d.minus[axis][idx], 0.0);
      const double fp = std::min(d.plus[axis][idx], 0.0);
      q += bm * bm + fp * fp;
    }
    out[idx] = q;
  }
  return out;
}

ScalarField shift(const ScalarField& f, int axis, int offset) {
  const GridSpec& g = f.grid();
  if (axis < 0 || axis >= g.dim) throw ConfigError("shift axis out of range");
  const Neighbors nb{g.n, g.dim};
  const int step = ((offset % g.n) + g.n) % g.n;
  ScalarField out(g);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    out[idx] = f[nb.offset(idx, axis, step)];
  }
  return out;
}

double integrate(const ScalarField& f) {
  return f.grid().cell_volume() * f.sum();
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner product");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
  return f.grid().cell_volume() * acc;
}

double l1_norm(const ScalarField& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += std::abs(v);
  return f.grid().cell_volume() * acc;
}

double l1_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  require_same_grid(a.grid(), b.grid(), "L1 distance");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.levels(); ++k) {
    const auto& fa = a[k];
    const auto& fb = b[k];
    for (std::size_t i = 0; i < fa.size(); ++i) acc += std::abs(fa[i] - fb[i]);
  }
  return a.grid().dt() * a.grid().cell_volume() * acc;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "max difference");
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out = std::max(out, std::abs(a[i] - b[i]));
  }
  return out;
}

}  // namespace mfgc

#include "mfgc/mollify.hpp"

#include <cmath>
#include <vector>

#include "mfgc/errors.hpp"

namespace mfgc {

namespace {

std::vector<double> periodic_gaussian(int n, double eps) {
  const double h = 1.0 / n;
  const int images = static_cast<int>(std::ceil(8.0 * eps)) + 1;
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j <= n / 2; ++j) {
    const double x = j * h;
    double acc = 0.0;
    for (int k = -images; k <= images; ++k) {
      const double d = x + k;
      acc += std::exp(-0.5 * d * d / (eps * eps));
    }
    w[static_cast<std::size_t>(j)] = acc;
    w[static_cast<std::size_t>((n - j) % n)] = acc;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

// Circular convolution along one axis.
ScalarField convolve_axis(const ScalarField& f, const std::vector<double>& w,
                          int axis) {
  const GridSpec& g = f.grid();
  const int n = g.n;
  ScalarField out(g);
  const int rows = g.dim == 2 ? n : 1;
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const int src = (i - j + n) % n;
        const double v = axis == 0 ? f.at(src, r) : f.at(r, src);
        acc += w[static_cast<std::size_t>(j)] * v;
      }
      if (axis == 0) {
        out.at(i, r) = acc;
      } else {
        out.at(r, i) = acc;
      }
    }
  }
  return out;
}

}  // namespace

ScalarField mollify(const ScalarField& f, double eps) {
  if (eps < 0.0) throw ConfigError("mollifier width must be nonnegative");
  if (eps == 0.0) return f;
  const auto w = periodic_gaussian(f.grid().n, eps);
  ScalarField out = convolve_axis(f, w, 0);
  if (f.grid().dim == 2) out = convolve_axis(out, w, 1);
  return out;
}

ScalarField regularized_running_cost(const ScalarField& m,
                                     const CouplingSpec& coupling, double eps) {
  ScalarField out = mollify(m, eps);
  for (double& v : out.values()) v = coupling.F(v);
  return mollify(out, eps);
}

ScalarField regularized_terminal_cost(const ScalarField& m,
                                      const CouplingSpec& coupling, double eps) {
  ScalarField out = mollify(m, eps);
  for (double& v : out.values()) v = coupling.G(v);
  return mollify(out, eps);
}

}  // namespace mfgc

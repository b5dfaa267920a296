#pragma once

// Periodic cell-centered grids on the unit torus (1-D or 2-D) with a uniform
// time grid, plus the finite-difference stencils shared by both PDE solvers.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mfgc {

struct GridSpec {
  int dim = 1;
  int n = 32;    ///< cells per dimension, spacing h = 1/n
  int nt = 32;   ///< time steps, dt = T/nt
  double T = 1.0;

  /// Throws ConfigError unless dim in {1,2}, n >= 4, nt >= 2, T > 0.
  GridSpec(int dim, int n, int nt, double T);
  GridSpec() = default;

  double h() const { return 1.0 / n; }
  double dt() const { return T / nt; }
  std::size_t cells() const;
  /// Cell volume h^dim.
  double cell_volume() const;
  double time(int k) const { return T * k / nt; }
  /// Cell center coordinate along one axis.
  double center(int i) const { return (i + 0.5) / n; }

  /// Same spatial layout (dim, n); time grids may differ.
  bool same_space(const GridSpec& other) const {
    return dim == other.dim && n == other.n;
  }
  bool operator==(const GridSpec& other) const = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  /// 2-D access, x index fastest; in 1-D `j` must be 0.
  double& at(int i, int j = 0) { return values_[index(i, j)]; }
  double at(int i, int j = 0) const { return values_[index(i, j)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.n) +
           static_cast<std::size_t>(i);
  }

  bool all_finite() const;
  double min() const;
  double max() const;
  double sum() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);

/// nt + 1 frames, frame k at t_k = k dt.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  explicit SpaceTimeField(const GridSpec& grid, double fill = 0.0);
  SpaceTimeField(const GridSpec& grid, const ScalarField& frame);

  const GridSpec& grid() const { return grid_; }
  std::size_t levels() const { return frames_.size(); }
  ScalarField& operator[](std::size_t k) { return frames_[k]; }
  const ScalarField& operator[](std::size_t k) const { return frames_[k]; }

  double min() const;

 private:
  GridSpec grid_;
  std::vector<ScalarField> frames_;
};

/// One-sided differences per axis, axis 0 = x.
struct OneSidedDiffs {
  std::vector<ScalarField> plus;   ///< (u(x+h e_i) - u(x)) / h
  std::vector<ScalarField> minus;  ///< (u(x) - u(x-h e_i)) / h
};

ScalarField laplacian(const ScalarField& f);
OneSidedDiffs one_sided_diffs(const ScalarField& u);
/// Godunov composite sum_i max(D^-_i u, 0)^2 + min(D^+_i u, 0)^2.
ScalarField numerical_gradient_sq(const ScalarField& u);
/// Periodic shift: result(x) = f(x + offset h e_axis).
ScalarField shift(const ScalarField& f, int axis, int offset);

/// h^dim sum f.
double integrate(const ScalarField& f);
/// h^dim sum f g.
double inner(const ScalarField& f, const ScalarField& g);
double l1_norm(const ScalarField& f);
/// dt * h^dim * sum over all nt + 1 time levels of |a - b|.
double l1_distance(const SpaceTimeField& a, const SpaceTimeField& b);
double max_abs_diff(const ScalarField& a, const ScalarField& b);

/// Throws GridMismatch when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace mfgc

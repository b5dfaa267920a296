#pragma once

// Monotone upwind discretization of H(m, Du) and its linearization
//   (A v)(x) = sum_i b_i(x) D^-_i v(x) + f_i(x) D^+_i v(x),
// with b_i >= 0 and f_i <= 0. The HJB Newton Jacobian is built from A and the
// Kolmogorov step uses the transpose of the same assembled matrix.

#include <cstddef>
#include <vector>

#include "mfgc/grid.hpp"
#include "mfgc/model.hpp"

namespace mfgc {

/// T_{1/eps} m = min(m, 1/eps); eps == 0 leaves m untouched.
ScalarField truncate_density(const ScalarField& m, double eps);

/// Clipped one-sided differences [max(D^-_0,0), min(D^+_0,0), max(D^-_1,0), ...].
/// The numerical Hamiltonian is the power-law H evaluated at this vector.
struct UpwindGradient {
  std::vector<ScalarField> components;

  /// |P|^2 at one cell.
  double norm_sq(std::size_t idx) const;
};

UpwindGradient upwind_gradient(const ScalarField& u);

/// Upwind split of H_p: b_i multiplies D^-_i, f_i multiplies D^+_i.
/// The net discrete H_p along axis i is b_i + f_i; the drift is its negative.
struct DriftField {
  GridSpec grid;
  std::vector<ScalarField> backward;
  std::vector<ScalarField> forward;

  /// -(b_axis + f_axis).
  ScalarField drift(int axis) const;
  bool operator==(const DriftField& other) const;
};

/// H_p of the numerical Hamiltonian at (m_hat, upwind gradient of u).
DriftField upwind_drift(const ScalarField& u, const ScalarField& m_hat,
                        const ModelParams& params);
/// g_h(m_hat, Du) = H(m_hat, P(u)) per cell.
ScalarField numerical_hamiltonian(const ScalarField& u, const ScalarField& m_hat,
                                  const ModelParams& params);

struct MatrixEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

class TransportOperator {
 public:
  explicit TransportOperator(DriftField drift);

  const GridSpec& grid() const { return drift_.grid; }
  const DriftField& drift() const { return drift_; }

  ScalarField apply(const ScalarField& v) const;
  /// Matrix-free transpose, written independently of apply().
  ScalarField apply_transpose(const ScalarField& m) const;

  /// Every stencil entry of A, including structural zeros, row-major order.
  std::vector<MatrixEntry> entries() const;

 private:
  DriftField drift_;
};

}  // namespace mfgc

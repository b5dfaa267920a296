#include "sparse.hpp"

#include <string>
#include <vector>

#include "mfgc/errors.hpp"

namespace mfgc::detail {

SparseMatrix implicit_operator(const GridSpec& grid, double nu, double dt,
                               const TransportOperator& transport) {
  const double diff = dt * nu / (grid.h() * grid.h());
  const auto n = static_cast<Eigen::Index>(grid.cells());
  std::vector<Eigen::Triplet<double>> triplets;
  const auto entries = transport.entries();
  triplets.reserve(entries.size() + grid.cells() * (1 + 2 * grid.dim));
  for (const auto& e : entries) {
    triplets.emplace_back(static_cast<Eigen::Index>(e.row),
                          static_cast<Eigen::Index>(e.col), dt * e.value);
  }
  // The transport entries enumerate the same neighbor pattern as the
  // Laplacian, so reuse their (row, col) pairs for the diffusion part.
  for (const auto& e : entries) {
    const double v = e.row == e.col ? 1.0 + 2.0 * grid.dim * diff : -diff;
    triplets.emplace_back(static_cast<Eigen::Index>(e.row),
                          static_cast<Eigen::Index>(e.col), v);
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

LinearMethod default_method(const GridSpec& grid) {
  return grid.dim == 1 ? LinearMethod::direct : LinearMethod::iterative;
}

Vector solve(const SparseMatrix& A, const Vector& rhs, LinearMethod method,
             double tol) {
  if (method == LinearMethod::direct) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
      throw LinearSolveFailed("sparse LU factorization failed: " +
                              lu.lastErrorMessage());
    }
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) {
      throw LinearSolveFailed("sparse LU solve failed");
    }
    return x;
  }
  Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> it;
  it.setTolerance(tol);
  it.setMaxIterations(10 * static_cast<Eigen::Index>(rhs.size()) + 100);
  it.compute(A);
  Vector x = it.solve(rhs);
  if (it.info() != Eigen::Success) {
    throw LinearSolveFailed("BiCGSTAB did not converge (error " +
                            std::to_string(it.error()) + ")");
  }
  return x;
}

Vector to_vector(const ScalarField& f) {
  Vector v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = f[i];
  }
  return v;
}

ScalarField to_field(const GridSpec& grid, const Vector& v) {
  ScalarField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = v[static_cast<Eigen::Index>(i)];
  }
  return f;
}

}  // namespace mfgc::detail

#pragma once

// Internal: assembly of the implicit Euler operator I - dt nu Lap + dt A and
// the linear solvers used by the HJB Newton iteration and the FPK step.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "mfgc/grid.hpp"
#include "mfgc/transport.hpp"

namespace mfgc::detail {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// I - dt nu Lap_h + dt A, with every stencil entry kept structurally.
SparseMatrix implicit_operator(const GridSpec& grid, double nu, double dt,
                               const TransportOperator& transport);

enum class LinearMethod { direct, iterative };

/// 1-D grids use a direct factorization, 2-D grids BiCGSTAB with a
/// diagonal preconditioner.
LinearMethod default_method(const GridSpec& grid);

/// Throws LinearSolveFailed on breakdown or non-convergence.
Vector solve(const SparseMatrix& A, const Vector& rhs, LinearMethod method,
             double tol);

Vector to_vector(const ScalarField& f);
ScalarField to_field(const GridSpec& grid, const Vector& v);

}  // namespace mfgc::detail

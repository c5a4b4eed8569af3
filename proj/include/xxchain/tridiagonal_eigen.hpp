#pragma once

#include <span>
#include <vector>

namespace xxchain {

struct TridiagonalEigenResult {
  std::vector<double> values;
  // Row-major: vectors[j * n + k] is component k of eigenvector j.
  std::vector<double> vectors;
  int sweeps = 0;
};

/// Eigenvalues and eigenvectors of a real symmetric tridiagonal matrix by the
/// implicit QL algorithm with Wilkinson-type shifts. Values come back in
/// ascending order. Throws Error(ConvergenceFailure) if an eigenvalue does not
/// deflate within 30 * n sweeps.
TridiagonalEigenResult symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                   std::span<const double> offdiag);

}  // namespace xxchain

#pragma once

#include <vector>

namespace pswf3d {

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  /// Infinity norm (max absolute row sum).
  double norm_inf() const;
  /// y = A x.
  std::vector<double> apply(const std::vector<double>& x) const;
};

/// All eigenvalues in ascending order by the implicit-shift QL iteration.
/// Throws NumericError naming the eigenvalue index if an iteration stalls.
std::vector<double> tridiagonal_eigenvalues(const SymTridiagonal& a);

/// Unit eigenvector for a converged eigenvalue, computed from a twisted
/// (top-down and bottom-up) LDL factorization of A - lambda I. Rapidly
/// decaying components keep full relative accuracy instead of bottoming out
/// at the rounding level of the largest entry.
std::vector<double> tridiagonal_eigenvector(const SymTridiagonal& a, double lambda);

}  // namespace pswf3d

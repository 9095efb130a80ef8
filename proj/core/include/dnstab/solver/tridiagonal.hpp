#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dnstab::solver {

/// Tridiagonal matrix stored as bands; lower[i] = A(i+1, i), upper[i] = A(i, i+1).
struct Tridiagonal {
  explicit Tridiagonal(std::size_t n = 0) : lower(n ? n - 1 : 0), diag(n), upper(n ? n - 1 : 0) {}

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> apply(std::span<const double> x) const;

  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
};

/// Solves A x = rhs by Gaussian elimination with partial pivoting (LAPACK
/// dgtsv). Throws InvariantViolation when A is singular.
std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::vector<double> rhs);

}  // namespace dnstab::solver

#include "dnstab/solver/tridiagonal.hpp"

#include <lapacke.h>

#include <string>

#include "dnstab/errors.hpp"

namespace dnstab::solver {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw GridMismatch("tridiagonal product with a vector of the wrong length");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i - 1] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::vector<double> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw GridMismatch("tridiagonal solve with a right-hand side of the wrong length");
  if (n == 0) return rhs;
  std::vector<double> dl = a.lower;
  std::vector<double> d = a.diag;
  std::vector<double> du = a.upper;
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(n), 1,
                                        dl.data(), d.data(), du.data(), rhs.data(),
                                        static_cast<lapack_int>(n));
  if (info > 0) {
    throw InvariantViolation("tridiagonal system is singular (pivot " + std::to_string(info) + ")");
  }
  if (info < 0) throw InvalidArgument("dgtsv rejected argument " + std::to_string(-info));
  return rhs;
}

}  // namespace dnstab::solver

#pragma once
#include <vector>

namespace radke {

/// General banded matrix in LAPACK dgbtrf layout (extra kl rows for fill-in).
struct BandedMatrix {
  int n = 0, kl = 0, ku = 0;
  std::vector<double> ab; // (2*kl+ku+1) x n, column-major
  std::vector<int> ipiv;
  bool factored = false;

  BandedMatrix() = default;
  BandedMatrix(int n_, int kl_, int ku_);

  int ld() const { return 2 * kl + ku + 1; }
  /// Entry access for assembly (row i, column j), zero-based; |i-j| <= band.
  double& at(int i, int j) { return ab[static_cast<size_t>(j) * ld() + (kl + ku + i - j)]; }
  void add(int i, int j, double v) { at(i, j) += v; }
  void clear();

  void factor();                              // dgbtrf
  void solve(std::vector<double>& rhs) const; // dgbtrs, in place
};

/// Symmetric-ish tridiagonal solve with pivoting (dgtsv), used by the
/// spectral inverse iteration. Overwrites rhs with the solution.
void solve_tridiag(std::vector<double> lower, std::vector<double> diag,
                   std::vector<double> upper, std::vector<double>& rhs);

} // namespace radke

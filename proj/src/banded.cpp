#include "radke/banded.hpp"
#include "radke/error.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab,
             const int* ldab, int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info);
void dgtsv_(const int* n, const int* nrhs, double* dl, double* d, double* du, double* b,
            const int* ldb, int* info);
}

namespace radke {

BandedMatrix::BandedMatrix(int n_, int kl_, int ku_) : n(n_), kl(kl_), ku(ku_) {
  ab.assign(static_cast<size_t>(ld()) * n, 0.0);
  ipiv.assign(n, 0);
}

void BandedMatrix::clear() {
  std::fill(ab.begin(), ab.end(), 0.0);
  factored = false;
}

void BandedMatrix::factor() {
  int info = 0;
  int ldab = ld();
  dgbtrf_(&n, &n, &kl, &ku, ab.data(), &ldab, ipiv.data(), &info);
  if (info != 0) throw Error("banded factorization failed, info=" + std::to_string(info));
  factored = true;
}

void BandedMatrix::solve(std::vector<double>& rhs) const {
  if (!factored) throw Error("banded solve before factorization");
  int info = 0, nrhs = 1, ldb = n;
  int ldab = ld();
  char trans = 'N';
  dgbtrs_(&trans, &n, &kl, &ku, &nrhs, ab.data(), &ldab, ipiv.data(), rhs.data(), &ldb, &info);
  if (info != 0) throw Error("banded solve failed, info=" + std::to_string(info));
}

void solve_tridiag(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                   std::vector<double>& rhs) {
  int n = static_cast<int>(diag.size());
  int info = 0, nrhs = 1;
  dgtsv_(&n, &nrhs, lower.data(), diag.data(), upper.data(), rhs.data(), &n, &info);
  if (info != 0) throw Error("tridiagonal solve failed, info=" + std::to_string(info));
}

} // namespace radke

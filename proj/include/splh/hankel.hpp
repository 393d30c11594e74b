#pragma once

#include <vector>

#include "splh/moments.hpp"
#include "splh/numerics.hpp"

namespace splh {

/// H_N = (mu_{j+k})_{j,k=0..N} together with its Cholesky factor and the
/// orthonormal-polynomial coefficient triangle (rows of L^{-1}).
struct HankelSystem {
  WeightParams params;
  long N;
  long bits;
  std::vector<Real> moments;                // mu_0..mu_2N, canonical values
  std::vector<std::vector<Real>> cholesky;  // lower triangle, row k has k+1 entries
  std::vector<std::vector<Real>> coeffs;    // filled by orthonormal_coeffs

  const Real& moment(long j, long k) const { return moments[j + k]; }
};

/// Builds and factors H_N at the table's precision. A nonpositive pivot is
/// reported as PrecisionError carrying the pivot index (the standard symptom
/// of too few bits for this condition number).
HankelSystem assemble(const MomentTable& moments, long N);

/// Coefficient rows c_{k,0..k} of the orthonormal polynomials, computed as
/// the rows of the inverse Cholesky factor. Leading coefficients are
/// positive. Idempotent; returns the cached triangle on repeat calls.
const std::vector<std::vector<Real>>& orthonormal_coeffs(HankelSystem& sys);

/// Diagonal of the circle kernel K_{jk} = int P_j(e^{i phi}) P_k(e^{-i phi}) dphi.
struct KernelDiagonal {
  std::vector<Real> kvals;  // K_00..K_NN, all positive
};

/// K_kk = 2 pi * sum_j c_{k,j}^2 (Parseval with real coefficients).
KernelDiagonal kernel_diagonal(HankelSystem& sys);

/// K_jk by equispaced quadrature on the unit circle with `nodes` points
/// (exact for trigonometric degree < nodes; default 8(N+1)). The independent
/// route used to validate the Parseval diagonal and the off-diagonal window.
Real kernel_entry_circle(HankelSystem& sys, long j, long k, long nodes = 0);

/// 2 pi / sum_k K_kk, a guaranteed lower bound for the smallest eigenvalue.
Real rayleigh_lower_bound(const KernelDiagonal& kd);

}  // namespace splh

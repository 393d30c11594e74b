#pragma once

// Test-side oracle: smallest root of det(H_N - x I) by cofactor expansion
// and leftmost-sign-change bisection. Independent of the Cholesky, the
// Householder reduction and the Sturm counts in the library; only usable at
// small orders (<= 7).

#include <stdexcept>
#include <vector>

#include "splh/moments.hpp"

namespace splh::testing {

inline Real det_shifted(const std::vector<std::vector<Real>>& H, const Real& x,
                        std::vector<int>& cols, long row) {
  const long n = static_cast<long>(H.size());
  if (row == n) return Real(1.0, x.prec());
  Real acc(x.prec());
  int sign = 1;
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    int c = cols[ci];
    if (c < 0) continue;
    Real entry = H[row][c];
    if (static_cast<long>(c) == row) entry -= x;
    if (!entry.is_zero()) {
      cols[ci] = -1;
      Real sub = det_shifted(H, x, cols, row + 1);
      cols[ci] = c;
      if (sign > 0) {
        acc.add_product(entry, sub);
      } else {
        acc.sub_product(entry, sub);
      }
    }
    sign = -sign;
  }
  return acc;
}

inline Real char_poly(const std::vector<std::vector<Real>>& H, const Real& x) {
  std::vector<int> cols(H.size());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = static_cast<int>(i);
  return det_shifted(H, x, cols, 0);
}

inline Real charpoly_smallest_root(const std::vector<std::vector<Real>>& H, long bits) {
  Real ub = H[0][0];
  for (std::size_t i = 1; i < H.size(); ++i) ub = min(ub, H[i][i]);
  if (!(char_poly(H, Real(0.0, bits)) > 0)) {
    throw std::logic_error("charpoly oracle: det(H) not positive");
  }
  // Geometric descent from the diagonal bound. The determinant is negative
  // exactly when an odd number of eigenvalues lies below x, so the smallest
  // eigenvalue is bracketed by the LAST sign change on the way down; the
  // descent continues until the sign has stayed positive through eight more
  // halvings (a 256x safety margin below the bracket).
  Real x = ub * Real(0.73, bits);
  Real last_neg(bits);
  bool have_neg = false;
  int pos_run = 0;
  for (int j = 0; j < 600; ++j) {
    Real d = char_poly(H, x);
    if (d.is_zero()) {
      x *= (1 + Real::pow2(-bits + 8, bits));
      continue;
    }
    if (d < 0) {
      last_neg = x;
      have_neg = true;
      pos_run = 0;
    } else if (have_neg && ++pos_run >= 8) {
      break;
    }
    x = ldexp2(x, -1);
  }
  if (!have_neg || pos_run < 8) {
    throw std::logic_error("charpoly oracle: no stable bracket found");
  }
  Real hi = last_neg;
  Real lo = ldexp2(last_neg, -1);
  while (hi - lo > Real::pow2(-60, bits) * hi) {
    Real mid = ldexp2(lo + hi, -1);
    Real d = char_poly(H, mid);
    if (d < 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return ldexp2(lo + hi, -1);
}

inline std::vector<std::vector<Real>> dense_hankel(const MomentTable& t, long N, long bits) {
  std::vector<std::vector<Real>> H(N + 1);
  for (long i = 0; i <= N; ++i) {
    for (long j = 0; j <= N; ++j) {
      Real v(bits);
      mpfr_set(v.raw(), t.values[i + j].raw(), MPFR_RNDN);
      H[i].push_back(std::move(v));
    }
  }
  return H;
}

}  // namespace splh::testing

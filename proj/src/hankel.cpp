#include "splh/hankel.hpp"

#include <cmath>

namespace splh {

HankelSystem assemble(const MomentTable& table, long N) {
  if (N < 0) throw DomainError("assemble: N must be >= 0");
  if (table.K() < 2 * N) {
    throw DomainError("assemble: moment table too short, need K >= 2N");
  }
  const long w = table.bits + 64;
  HankelSystem sys{table.params, N, table.bits, {}, {}, {}};
  sys.moments.reserve(2 * N + 1);
  for (long i = 0; i <= 2 * N; ++i) {
    Real v(w);
    mpfr_set(v.raw(), table.values[i].raw(), MPFR_RNDN);
    sys.moments.push_back(std::move(v));
  }

  sys.cholesky.resize(N + 1);
  Real s(w);
  for (long i = 0; i <= N; ++i) {
    sys.cholesky[i].reserve(i + 1);
    for (long j = 0; j <= i; ++j) {
      mpfr_set(s.raw(), sys.moment(i, j).raw(), MPFR_RNDN);
      for (long k = 0; k < j; ++k) s.sub_product(sys.cholesky[i][k], sys.cholesky[j][k]);
      if (i == j) {
        if (s.sign() <= 0) {
          throw PrecisionError(
              "assemble: Cholesky pivot " + std::to_string(i) +
                  " nonpositive; working precision insufficient for this order",
              i, s.is_zero() ? -1e300 : mpfr_get_exp(s.raw()) * 1.0);
        }
        sys.cholesky[i].push_back(sqrt(s));
      } else {
        sys.cholesky[i].push_back(s / sys.cholesky[j][j]);
      }
    }
  }
  return sys;
}

const std::vector<std::vector<Real>>& orthonormal_coeffs(HankelSystem& sys) {
  if (!sys.coeffs.empty()) return sys.coeffs;
  const long n = sys.N + 1;
  const long w = sys.bits + 64;
  sys.coeffs.resize(n);
  // Row k of L^{-1}: forward substitution against the unit vector e_k.
  Real s(w);
  for (long i = 0; i < n; ++i) {
    sys.coeffs[i].reserve(i + 1);
    for (long j = 0; j <= i; ++j) {
      if (i == j) {
        mpfr_set_si(s.raw(), 1, MPFR_RNDN);
      } else {
        mpfr_set_zero(s.raw(), +1);
      }
      for (long k = j; k < i; ++k) s.sub_product(sys.cholesky[i][k], sys.coeffs[k][j]);
      sys.coeffs[i].push_back(s / sys.cholesky[i][i]);
    }
  }
  return sys.coeffs;
}

KernelDiagonal kernel_diagonal(HankelSystem& sys) {
  const auto& c = orthonormal_coeffs(sys);
  const long w = sys.bits + 64;
  const Real two_pi = ldexp2(Real::pi(w), 1);
  KernelDiagonal kd;
  kd.kvals.reserve(sys.N + 1);
  Real s(w);
  for (long k = 0; k <= sys.N; ++k) {
    mpfr_set_zero(s.raw(), +1);
    for (long j = 0; j <= k; ++j) s.add_product(c[k][j], c[k][j]);
    kd.kvals.push_back(two_pi * s);
  }
  return kd;
}

Real kernel_entry_circle(HankelSystem& sys, long j, long k, long nodes) {
  const auto& c = orthonormal_coeffs(sys);
  const long w = sys.bits + 64;
  if (nodes <= 0) nodes = 8 * (sys.N + 1);
  const Real pi_w = Real::pi(w);
  const Real step = ldexp2(pi_w, 1) / nodes;

  // Real part of P_j(e^{i phi}) conj(P_k(e^{i phi})) integrated by the
  // midpoint rule; the imaginary part integrates to zero by symmetry.
  Real acc(w), sn(w), cn(w);
  for (long i = 0; i < nodes; ++i) {
    Real phi = step * i + ldexp2(step, -1) - pi_w;
    Real aj(w), bj(w), ak(w), bk(w);
    Real rc(1.0, w), rs(w);  // cos(r*phi), sin(r*phi) built by angle addition
    sin_cos(sn, cn, phi);
    for (long r = 0; r <= std::max(j, k); ++r) {
      if (r > 0) {
        Real nrc = rc * cn - rs * sn;
        Real nrs = rs * cn + rc * sn;
        rc = std::move(nrc);
        rs = std::move(nrs);
      }
      if (r <= j) {
        aj.add_product(c[j][r], rc);
        bj.add_product(c[j][r], rs);
      }
      if (r <= k) {
        ak.add_product(c[k][r], rc);
        bk.add_product(c[k][r], rs);
      }
    }
    acc += aj * ak + bj * bk;
  }
  return acc * step;
}

Real rayleigh_lower_bound(const KernelDiagonal& kd) {
  if (kd.kvals.empty()) throw DomainError("rayleigh_lower_bound: empty kernel diagonal");
  const long w = kd.kvals.front().prec();
  Real s(w);
  for (const auto& v : kd.kvals) s += v;
  return ldexp2(Real::pi(w), 1) / s;
}

}  // namespace splh

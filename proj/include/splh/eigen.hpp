#pragma once

#include <optional>
#include <vector>

#include "splh/hankel.hpp"
#include "splh/moments.hpp"
#include "splh/numerics.hpp"

namespace splh {

/// Symmetric tridiagonal similarity reduction of H_N.
struct TridiagonalForm {
  std::vector<Real> diag;     // a_0..a_N
  std::vector<Real> offdiag;  // b_1..b_N
  long bits;
};

/// Householder reduction at ctx.bits working precision; O(N^3) operations.
TridiagonalForm tridiagonalize(const HankelSystem& sys, const PrecisionContext& ctx);

/// Number of eigenvalues of T strictly below x, by counting negative pivots
/// of the shifted LDL recurrence. A vanishing pivot perturbs x by one ulp.
long sturm_count(const TridiagonalForm& T, const Real& x);

/// lambda_N with a certified enclosure and the escalation history.
struct EigenCertificate {
  Real lambda_min;
  Interval enclosure;
  long bits_used;
  int escalations;
};

struct EigenOptions {
  /// Enclosure target: relative width and run-agreement both 2^-target.
  long target_rel_exponent = 48;
  /// Hard ceiling on escalated working precision.
  long bits_ceiling = 1L << 22;
  int max_escalations = 16;
};

/// Certified smallest eigenvalue. Bisection runs between the Rayleigh
/// kernel bound (scaled down) and the smallest diagonal entry of T; the
/// whole chain is then repeated 64 bits higher and must agree to the target,
/// otherwise precision doubles (an escalation) and both runs repeat.
EigenCertificate smallest_eigenvalue(const WeightParams& p, long N,
                                     const PrecisionContext& ctx,
                                     const EigenOptions& opts = {});

/// Overload reusing an assembled system for the first pass when its
/// precision matches ctx.
EigenCertificate smallest_eigenvalue(const HankelSystem& sys, const PrecisionContext& ctx,
                                     const EigenOptions& opts = {});

/// Suggested working bits for order N: tracks the factorial growth of
/// mu_{2N} plus exp(-c sqrt(N)) smallest-eigenvalue slack.
long precision_policy(long N, const WeightParams& p);

/// Single fixed-precision pass (no certification); exposed for tests and
/// for the sweep driver, which reports the per-pass Rayleigh bound.
struct EigenPass {
  Real lambda;
  Interval enclosure;
  Real rayleigh_bound;
};
EigenPass eigen_pass(const WeightParams& p, long N, long bits, long target_rel_exponent);

}  // namespace splh

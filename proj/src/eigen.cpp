#include "splh/eigen.hpp"

#include <cmath>

namespace splh {

TridiagonalForm tridiagonalize(const HankelSystem& sys, const PrecisionContext& ctx) {
  const long n = sys.N + 1;
  const long w = ctx.bits;
  // Dense working copy (the system itself only stores the defining moments).
  std::vector<std::vector<Real>> A(n);
  for (long i = 0; i < n; ++i) {
    A[i].reserve(n);
    for (long j = 0; j < n; ++j) {
      Real v(w);
      mpfr_set(v.raw(), sys.moment(i, j).raw(), MPFR_RNDN);
      A[i].push_back(std::move(v));
    }
  }

  TridiagonalForm T{{}, {}, w};
  std::vector<Real> v, p, wv;
  for (long k = 0; k + 2 < n; ++k) {
    // Householder vector for column k below the diagonal.
    Real sigma2(w);
    for (long i = k + 1; i < n; ++i) sigma2.add_product(A[i][k], A[i][k]);
    Real sigma = sqrt(sigma2);
    if (sigma.is_zero()) continue;
    if (A[k + 1][k].sign() < 0) sigma = -sigma;

    v.assign(n, Real(w));
    for (long i = k + 1; i < n; ++i) v[i] = A[i][k];
    v[k + 1] += sigma;
    // v^T v = |x|^2 + 2 sigma x_1 + sigma^2; the sign choice above keeps the
    // middle term nonnegative, so no cancellation.
    Real vtv = sigma2;
    vtv.add_product(sigma, ldexp2(A[k + 1][k], 1));
    vtv.add_product(sigma, sigma);
    Real beta = 2 / vtv;

    // p = beta * A v on the trailing block, then rank-two update.
    p.assign(n, Real(w));
    for (long i = k + 1; i < n; ++i) {
      Real s(w);
      for (long j = k + 1; j < n; ++j) s.add_product(A[i][j], v[j]);
      p[i] = beta * s;
    }
    Real K(w);
    for (long i = k + 1; i < n; ++i) K.add_product(v[i], p[i]);
    K = ldexp2(beta * K, -1);
    wv.assign(n, Real(w));
    for (long i = k + 1; i < n; ++i) {
      wv[i] = p[i];
      wv[i].sub_product(K, v[i]);
    }
    for (long i = k + 1; i < n; ++i) {
      for (long j = k + 1; j <= i; ++j) {
        A[i][j].sub_product(v[i], wv[j]);
        A[i][j].sub_product(wv[i], v[j]);
        if (j != i) mpfr_set(A[j][i].raw(), A[i][j].raw(), MPFR_RNDN);
      }
    }
    A[k + 1][k] = -sigma;
    for (long i = k + 2; i < n; ++i) mpfr_set_zero(A[i][k].raw(), +1);
  }

  T.diag.reserve(n);
  T.offdiag.reserve(n - 1);
  for (long i = 0; i < n; ++i) T.diag.push_back(A[i][i]);
  for (long i = 1; i < n; ++i) T.offdiag.push_back(A[i][i - 1]);
  return T;
}

long sturm_count(const TridiagonalForm& T, const Real& x) {
  const long n = static_cast<long>(T.diag.size());
  const long w = T.bits;
  Real shift(w);
  mpfr_set(shift.raw(), x.raw(), MPFR_RNDN);
  for (int attempt = 0; attempt < 4; ++attempt) {
    long count = 0;
    Real d(w);
    bool hit_zero = false;
    for (long i = 0; i < n; ++i) {
      Real di = T.diag[i] - shift;
      if (i > 0) di -= (T.offdiag[i - 1] * T.offdiag[i - 1]) / d;
      if (di.is_zero()) {
        hit_zero = true;
        break;
      }
      if (di.sign() < 0) ++count;
      d = std::move(di);
    }
    if (!hit_zero) return count;
    // Pivot vanished exactly: nudge the shift by one ulp and recount.
    mpfr_nextabove(shift.raw());
  }
  throw Error("sturm_count: repeated exact-zero pivots");
}

namespace {

struct PassOutput {
  Real lambda;
  Interval enclosure;
  Real rayleigh;
};

PassOutput run_pass(const WeightParams& p, long N, long bits, long target_rel_exponent,
                    const HankelSystem* reuse) {
  PrecisionContext ctx(bits, bits - 16);
  HankelSystem local = (reuse && reuse->bits == bits)
                           ? *reuse
                           : assemble(compute_moment_table(p, std::max(2L, 2 * N), ctx), N);
  KernelDiagonal kd = kernel_diagonal(local);
  Real bound = rayleigh_lower_bound(kd);

  TridiagonalForm T = tridiagonalize(local, ctx);
  const long w = ctx.bits;
  Real lo = bound * (1 - Real::pow2(-8, w));
  Real hi = T.diag[0];
  for (const auto& d : T.diag) hi = min(hi, d);
  hi = hi * (1 + Real::pow2(-8, w));

  if (sturm_count(T, lo) != 0) {
    throw Error("smallest_eigenvalue: Rayleigh bound bracket not below lambda_min");
  }
  if (sturm_count(T, hi) < 1) {
    throw Error("smallest_eigenvalue: diagonal bracket not above lambda_min");
  }
  const Real width_target = Real::pow2(-(target_rel_exponent + 2), w);
  while (hi - lo > width_target * hi) {
    Real mid = ldexp2(lo + hi, -1);
    if (sturm_count(T, mid) >= 1) {
      hi = std::move(mid);
    } else {
      lo = std::move(mid);
    }
  }
  Real lam = ldexp2(lo + hi, -1);
  return {lam, Interval(lo, hi), bound};
}

EigenCertificate certify_loop(const WeightParams& p, long N, const PrecisionContext& ctx,
                              const EigenOptions& opts, const HankelSystem* reuse) {
  long bits = ctx.bits;
  int escalations = 0;
  const Real agree = Real::pow2(-opts.target_rel_exponent, 64);

  std::string last = "(none)", prev = "(none)";
  while (true) {
    std::string fail_reason;
    try {
      PassOutput first = run_pass(p, N, bits, opts.target_rel_exponent, reuse);
      PassOutput second = run_pass(p, N, bits + 64, opts.target_rel_exponent, nullptr);
      prev = first.lambda.to_string(30);
      last = second.lambda.to_string(30);
      Real rel = abs(first.lambda - second.lambda) / second.lambda;
      if (rel <= agree) {
        if (!(second.enclosure.lo > 0)) {
          throw Error("smallest_eigenvalue: enclosure not positive");
        }
        return {second.lambda, second.enclosure, bits + 64, escalations};
      }
    } catch (const PrecisionError& e) {
      // Nonpositive pivot is the expected symptom of starved precision;
      // fold it into the escalation path.
      fail_reason = e.what();
    }
    ++escalations;
    bits *= 2;
    if (bits > opts.bits_ceiling || escalations > opts.max_escalations) {
      throw ResourceError("smallest_eigenvalue: escalation ceiling reached at " +
                          std::to_string(bits) + " bits; last two estimates " + prev + " and " +
                          last + (fail_reason.empty() ? "" : ("; " + fail_reason)));
    }
  }
}

}  // namespace

EigenPass eigen_pass(const WeightParams& p, long N, long bits, long target_rel_exponent) {
  auto out = run_pass(p, N, bits, target_rel_exponent, nullptr);
  return {out.lambda, out.enclosure, out.rayleigh};
}

EigenCertificate smallest_eigenvalue(const WeightParams& p, long N,
                                     const PrecisionContext& ctx, const EigenOptions& opts) {
  return certify_loop(p, N, ctx, opts, nullptr);
}

EigenCertificate smallest_eigenvalue(const HankelSystem& sys, const PrecisionContext& ctx,
                                     const EigenOptions& opts) {
  return certify_loop(sys.params, sys.N, ctx, opts, &sys);
}

long precision_policy(long N, const WeightParams& p) {
  const double n1 = static_cast<double>(N + 1);
  const double arg = 2.0 * n1 * std::log2(2.0 * N + p.alpha + 2.0);
  return 128 + static_cast<long>(std::ceil(arg)) + static_cast<long>(std::ceil(6.0 * std::sqrt(n1)));
}

}  // namespace splh

#include "splh/asymptotics.hpp"

#include <cmath>

namespace splh {

EndpointExpansion endpoint_expansion(const WeightParams& p, long N, bool include_quartic,
                                     long prec) {
  if (2.0 * N + p.alpha <= 0.0) throw DomainError("endpoint_expansion: need 2N + alpha > 0");
  if (include_quartic && p.t == 0.0) {
    throw DomainError("endpoint_expansion: quartic a-term divides by t^{1/3}, need t > 0");
  }
  Real alpha(p.alpha, prec), t(p.t, prec);
  Real m = Real(2 * N, prec) + alpha;
  Real m13 = cbrt(m);
  Real m23 = m13 * m13;
  Real t13 = cbrt(t);
  Real t23 = t13 * t13;

  Real a = t23 / ldexp2(m13, 1) + alpha * t13 / (3 * m23) + alpha * alpha / (6 * m);
  int order = 3;
  if (include_quartic) {
    a += 5 * pow(alpha, 3L) / (81 * t13 * m * m13);
    order = 4;
  }
  Real b = ldexp2(m, 1) + 3 * t23 / ldexp2(m13, 1) - alpha * t13 / m23 - alpha * alpha / (6 * m);
  return {a, b, order, include_quartic};
}

EndpointPair solve_endpoints_exact(const WeightParams& p, long N, const PrecisionContext& ctx) {
  if (N < 1) throw DomainError("solve_endpoints_exact: N must be >= 1");
  if (p.t == 0.0 && p.alpha == 0.0) {
    throw HardEdgeError("solve_endpoints_exact: hard edge at t=0, alpha=0 (a=0, b=4N exactly)");
  }
  const long w = ctx.bits;
  Real alpha(p.alpha, w), t(p.t, w), twoN(2 * N, w);

  if (p.t == 0.0) {
    // System closes: ab = alpha^2, a+b = 4N + 2 alpha.
    Real s = ldexp2(twoN + alpha, 1);
    Real prod = alpha * alpha;
    Real root = sqrt(s * s - 4 * prod);
    return EndpointPair(ldexp2(s - root, -1), ldexp2(s + root, -1));
  }

  auto F = [&](const Real& a, const Real& b) -> std::pair<Real, Real> {
    Real u = sqrt(a * b);
    Real f1 = ldexp2(a + b, -1) - t / u - alpha - twoN;
    Real f2 = 1 - t * (a + b) / ldexp2(u * u * u, 1) - alpha / u;
    return {f1, f2};
  };
  auto J = [&](const Real& a, const Real& b) -> std::array<Real, 4> {
    Real u = sqrt(a * b);
    Real u3 = u * u * u;
    Real u5 = u3 * u * u;
    Real half(0.5, w);
    return {
        half + t * b / ldexp2(u3, 1),
        half + t * a / ldexp2(u3, 1),
        -t / ldexp2(u3, 1) + 3 * t * (a + b) * b / (4 * u5) + alpha * b / ldexp2(u3, 1),
        -t / ldexp2(u3, 1) + 3 * t * (a + b) * a / (4 * u5) + alpha * a / ldexp2(u3, 1),
    };
  };

  EndpointExpansion start = endpoint_expansion(p, N, /*include_quartic=*/p.alpha != 0.0, w);
  Real scale = max(abs(twoN), Real(1.0, w));
  auto [a, b] = newton_solve_2d(F, J, {start.a_N, start.b_N}, ctx, scale);
  return EndpointPair(a, b);
}

namespace {

Real as_prec(const Real& v, long prec) {
  Real r(prec);
  mpfr_set(r.raw(), v.raw(), MPFR_RNDN);
  return r;
}

Real neg_one_pow(long N, long prec) { return Real(N % 2 == 0 ? 1.0 : -1.0, prec); }

}  // namespace

Real pn_full(const Real& z, const WeightParams& p, long N, const EndpointPair& endpoints,
             long prec) {
  Real a = as_prec(endpoints.a, prec);
  Real b = as_prec(endpoints.b, prec);
  Real zz = as_prec(z, prec);
  if (!(zz < a)) throw DomainError("pn_full: formula requires real z < a");
  Real alpha(p.alpha, prec), t(p.t, prec);

  Real az = a - zz;
  Real bz = b - zz;
  Real R = sqrt(az * bz);  // |sqrt((z-a)(z-b))| on the e^{i pi} branch
  Real bma = b - a;
  Real two_pi = ldexp2(Real::pi(prec), 1);

  Real pref = neg_one_pow(N, prec) / sqrt(two_pi * bma);
  Real growth = pow((sqrt(az) + sqrt(bz)) / sqrt(bma), 2 * N);
  Real ratio = bz / az;
  Real q = sqrt(sqrt(ratio));
  Real quarter = q + 1 / q;

  Real expo = t / ldexp2(zz, 1) - t * R / (ldexp2(zz, 1) * sqrt(a * b)) + ldexp2(zz, -1) +
              ldexp2(R, -1);
  if (p.alpha != 0.0) {
    Real logarg = (ldexp2(a * b, 1) - (a + b) * zz + ldexp2(sqrt(a * b) * R, 1)) /
                  pow(sqrt(az) + sqrt(bz), 2L);
    expo -= ldexp2(alpha * log(logarg), -1);
  }
  return pref * growth * quarter * exp(expo);
}

Real pn_eta_form(const Real& z, const WeightParams& p, long N, const EndpointPair& endpoints,
                 long prec) {
  Real a = as_prec(endpoints.a, prec);
  Real b = as_prec(endpoints.b, prec);
  Real zz = as_prec(z, prec);
  if (!(zz < 0)) throw DomainError("pn_eta_form: requires z < 0");
  Real bma = b - a;
  Real eta = -zz / bma;
  if (!(eta < 1)) throw DomainError("pn_eta_form: requires |eta| < 1");
  Real alpha(p.alpha, prec), t(p.t, prec);
  Real two_pi = ldexp2(Real::pi(prec), 1);

  Real pref = neg_one_pow(N, prec) / (sqrt(sqrt(eta)) * sqrt(two_pi * bma));
  if (p.alpha != 0.0) pref *= pow(-zz, -ldexp2(alpha, -1));
  Real expo = ldexp2(zz, -1) + t / ldexp2(zz, 1);
  expo += (2 * N + 1 + alpha) * asinh(sqrt(eta));
  Real coeff = ldexp2(bma, -1) - bma * t / (ldexp2(zz, 1) * sqrt(a * b));
  expo += coeff * sqrt(eta * (eta + 1));
  return pref * exp(expo);
}

Real pn_simplified(const Real& z, const WeightParams& p, long N, const EndpointPair& endpoints,
                   long prec) {
  Real zz = as_prec(z, prec);
  if (!(zz < 0)) throw DomainError("pn_simplified: requires z < 0");
  Real a = as_prec(endpoints.a, prec);
  Real b = as_prec(endpoints.b, prec);
  Real alpha(p.alpha, prec), t(p.t, prec);
  Real bma = b - a;
  Real sb = sqrt(bma);
  Real two_pi = ldexp2(Real::pi(prec), 1);

  Real pref = neg_one_pow(N, prec) / sqrt(two_pi) * pow(-zz, -ldexp2(alpha, -1) - Real(0.25, prec)) /
              sqrt(sqrt(bma));
  Real expo = ldexp2(zz, -1) + t / ldexp2(zz, 1);
  Real coeff = (Real(2 * N, prec) + alpha) / sb + ldexp2(sb, -1);
  if (p.t != 0.0) coeff -= sb * t / (ldexp2(zz, 1) * sqrt(a * b));
  expo += coeff * sqrt(-zz);
  return pref * exp(expo);
}

std::string variant_name(PredictionVariant v) {
  switch (v) {
    case PredictionVariant::ProofForm: return "proof";
    case PredictionVariant::TheoremForm: return "theorem";
    case PredictionVariant::T0Alpha: return "t0-alpha";
    case PredictionVariant::T0Szego: return "t0-szego";
  }
  return "?";
}

PredictionVariant variant_from_name(const std::string& s) {
  if (s == "proof") return PredictionVariant::ProofForm;
  if (s == "theorem") return PredictionVariant::TheoremForm;
  if (s == "t0-alpha") return PredictionVariant::T0Alpha;
  if (s == "t0-szego") return PredictionVariant::T0Szego;
  throw ConfigError("unknown prediction variant '" + s + "'");
}

LambdaPrediction lambda_prediction(const WeightParams& p, long N, PredictionVariant variant,
                                   long prec) {
  if (N < 1) throw DomainError("lambda_prediction: N must be >= 1");
  Real pi_w = Real::pi(prec);
  Real pi32 = pi_w * sqrt(pi_w);
  Real alpha(p.alpha, prec), t(p.t, prec);

  switch (variant) {
    case PredictionVariant::T0Szego: {
      if (p.t != 0.0) throw DomainError("lambda_prediction: t0-szego form requires t = 0");
      Real n(N, prec);
      Real val = pow(Real(2.0, prec), Real(3.5, prec)) * pi32 * exp(Real(1.0, prec)) *
                 sqrt(sqrt(n)) * exp(-4 * sqrt(n));
      return {val, variant};
    }
    case PredictionVariant::T0Alpha: {
      if (p.t != 0.0) throw DomainError("lambda_prediction: t0-alpha form requires t = 0");
      Real m = Real(2 * N, prec) + alpha;
      Real val = pow(Real(2.0, prec), Real(3.25, prec)) * pi32 * exp(Real(1.0, prec)) *
                 sqrt(sqrt(m)) * exp(-pow(Real(2.0, prec), Real(1.5, prec)) * sqrt(m));
      return {val, variant};
    }
    case PredictionVariant::ProofForm:
    case PredictionVariant::TheoremForm: {
      if (p.t == 0.0) {
        throw DomainError("lambda_prediction: general forms need t > 0 (t/sqrt(a_N) is 0/0); "
                          "use a t0 variant");
      }
      Real aN = endpoint_expansion(p, N, /*include_quartic=*/true, prec).a_N;
      Real root = sqrt(ldexp2(Real(2 * N, prec) + alpha, 1));  // (4N+2alpha)^{1/2}
      Real sa = sqrt(aN);
      Real bracket = root + t / ldexp2(sa, 1);
      bracket -= (variant == PredictionVariant::ProofForm) ? ldexp2(t, -1) : ldexp2(t, 1);
      if (!(bracket > 0)) throw DomainError("lambda_prediction: bracket nonpositive");
      Real val = 8 * pi32 * sqrt(bracket) * exp(1 + t - ldexp2(root, 1) - t / sa);
      return {val, variant};
    }
  }
  throw DomainError("lambda_prediction: unknown variant");
}

Real kernel_diag_asymptotic(const WeightParams& p, long N_total, long mu, long prec) {
  if (N_total < 1) throw DomainError("kernel_diag_asymptotic: N must be >= 1");
  const double lo = static_cast<double>(N_total) - std::sqrt(static_cast<double>(N_total));
  if (static_cast<double>(mu) < lo || mu > N_total) {
    throw DomainError("kernel_diag_asymptotic: mu outside the window [N - sqrt(N), N]");
  }
  Real alpha(p.alpha, prec), t(p.t, prec);
  Real root = sqrt(ldexp2(Real(2 * N_total, prec) + alpha, 1));
  Real pi_w = Real::pi(prec);

  Real bracket = root;
  Real efac = exp(Real(-1.0, prec));
  if (p.t != 0.0) {
    Real aN = endpoint_expansion(p, N_total, /*include_quartic=*/true, prec).a_N;
    Real sa = sqrt(aN);
    bracket += t / ldexp2(sa, 1) - ldexp2(t, -1);
    efac = exp(-1 - t + t / sa);
  }
  Real mu_root = sqrt(ldexp2(Real(2 * mu, prec) + alpha, 1));
  return efac * exp(ldexp2(mu_root, 1)) / (sqrt(pi_w) * root * sqrt(bracket));
}

}  // namespace splh

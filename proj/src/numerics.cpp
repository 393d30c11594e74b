#include "splh/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace splh {

namespace {

constexpr int kMaxLevels = 13;
constexpr double kTrapCap = 16.0;  // |s| cap for the transformed axis

/// One truncated trapezoid pass at step h over the transformed axis.
/// Scans outward from s=0 in both directions until the terms stay below
/// max_term * 2^-(qte+16) for several consecutive nodes.
Real de_level_sum(const Integrand& f, const Real& half_pi, long wbits, long qte,
                  double h, long* evals) {
  Real sum(wbits);
  Real max_term(wbits);
  Real cutoff_scale = Real::pow2(-(qte + 16), wbits);
  const long j_cap = static_cast<long>(kTrapCap / h);

  Real s(wbits), sh(wbits), ch(wbits), x(wbits);
  for (int dir = 0; dir < 2; ++dir) {
    int below = 0;
    for (long j = (dir == 0 ? 0 : -1); dir == 0 ? j <= j_cap : j >= -j_cap;
         dir == 0 ? ++j : --j) {
      mpfr_set_d(s.raw(), static_cast<double>(j) * h, MPFR_RNDN);
      sinh_cosh(sh, ch, s);
      x = exp(half_pi * sh);
      if (x.is_zero()) break;  // transform underflowed, tail is exactly lost anyway
      Real term = f(x) * half_pi * ch * x;
      ++*evals;
      if (!term.is_finite()) {
        throw DomainError("integrate_halfline: integrand evaluated non-finite");
      }
      sum += term;
      Real at = abs(term);
      if (at > max_term) max_term = at;
      if (at <= max_term * cutoff_scale) {
        if (++below >= 4) break;
      } else {
        below = 0;
      }
    }
  }
  Real hh(h, wbits);
  return sum * hh;
}

Real sine_level_sum(const Integrand& g, const Real& center, const Real& radius,
                    const Real& pi_w, long wbits, long M, long* evals) {
  // (1/2) * (2*pi/M) * sum over midpoints of the periodized integrand.
  Real sum(wbits);
  Real step = pi_w * 2 / M;
  Real sn(wbits), cn(wbits);
  for (long i = 0; i < M; ++i) {
    Real theta = step * i + ldexp2(step, -1) - pi_w;
    sin_cos(sn, cn, theta);
    Real x = center + radius * sn;
    Real gv = g(x);
    ++*evals;
    if (!gv.is_finite()) {
      throw DomainError("integrate_finite_sqrt_weight: g evaluated non-finite inside [a,b]");
    }
    sum += gv;
  }
  return ldexp2(sum * step, -1);
}

}  // namespace

Real integrate_halfline(const Integrand& f, const PrecisionContext& ctx,
                        QuadratureDiagnostics* diag) {
  const long wbits = ctx.bits + 64;
  const Real tol = Real::pow2(-ctx.quad_tolerance_exponent, wbits);
  const Real half_pi = ldexp2(Real::pi(wbits), -1);
  long evals = 0;

  Real prev(wbits), prev2(wbits);
  bool have_prev = false, have_prev2 = false;
  for (int level = 2; level <= kMaxLevels; ++level) {
    const double h = std::ldexp(1.0, -level);
    Real cur = de_level_sum(f, half_pi, wbits, ctx.quad_tolerance_exponent, h, &evals);
    if (have_prev) {
      Real diff = abs(cur - prev);
      Real scale = max(abs(cur), abs(prev));
      if (diag) {
        diag->levels_used = level;
        diag->evaluations = evals;
        if (scale.is_zero()) {
          diag->level_error_log2.push_back(-1e9);
        } else {
          double rd = (diff / scale).to_double();
          diag->level_error_log2.push_back(rd == 0.0 ? -1e9 : std::log2(std::abs(rd)));
        }
      }
      if (scale.is_zero()) {
        Real zero(ctx.bits);
        return zero;
      }
      if (diff <= tol * scale) {
        Real out(ctx.bits);
        mpfr_set(out.raw(), cur.raw(), MPFR_RNDN);
        return out;
      }
    }
    prev2 = prev;
    have_prev2 = have_prev;
    prev = cur;
    have_prev = true;
  }
  throw ConvergenceError("integrate_halfline: no two-level agreement after max refinement depth",
                         prev.to_string(40),
                         have_prev2 ? prev2.to_string(40) : "(single level only)");
}

Real integrate_finite_sqrt_weight(const Integrand& g, const EndpointPair& endpoints,
                                  const PrecisionContext& ctx, QuadratureDiagnostics* diag) {
  const long wbits = ctx.bits + 64;
  const Real tol = Real::pow2(-ctx.quad_tolerance_exponent, wbits);
  const Real pi_w = Real::pi(wbits);
  Real a(wbits), b(wbits);
  mpfr_set(a.raw(), endpoints.a.raw(), MPFR_RNDN);
  mpfr_set(b.raw(), endpoints.b.raw(), MPFR_RNDN);
  const Real center = ldexp2(a + b, -1);
  const Real radius = ldexp2(b - a, -1);
  long evals = 0;

  Real prev(wbits), prev2(wbits);
  bool have_prev = false, have_prev2 = false;
  long M = 16;
  for (int level = 0; level <= kMaxLevels; ++level, M *= 2) {
    Real cur = sine_level_sum(g, center, radius, pi_w, wbits, M, &evals);
    if (have_prev) {
      Real diff = abs(cur - prev);
      Real scale = max(abs(cur), abs(prev));
      if (diag) {
        diag->levels_used = level;
        diag->evaluations = evals;
        if (scale.is_zero()) {
          diag->level_error_log2.push_back(-1e9);
        } else {
          Real rel = diff / scale;
          double rd = rel.to_double();
          diag->level_error_log2.push_back(rd == 0.0 ? -1e9 : std::log2(std::abs(rd)));
        }
      }
      if (scale.is_zero()) {
        Real zero(ctx.bits);
        return zero;
      }
      if (diff <= tol * scale) {
        Real out(ctx.bits);
        mpfr_set(out.raw(), cur.raw(), MPFR_RNDN);
        return out;
      }
    }
    prev2 = prev;
    have_prev2 = have_prev;
    prev = cur;
    have_prev = true;
  }
  throw ConvergenceError(
      "integrate_finite_sqrt_weight: no two-level agreement after max refinement depth",
      prev.to_string(40), have_prev2 ? prev2.to_string(40) : "(single level only)");
}

std::pair<Real, Real> newton_solve_2d(const Fn2& F, const Jacobian2& J,
                                      std::pair<Real, Real> start,
                                      const PrecisionContext& ctx, const Real& scale) {
  const long wbits = ctx.bits;
  Real x = start.first, y = start.second;
  const Real tol = Real::pow2(-ctx.quad_tolerance_exponent, wbits) * abs(scale);
  std::vector<Real> steps;
  std::string prev_trace = "(start)";
  int growing = 0;
  Real last_norm(-1.0, wbits);

  for (int iter = 0; iter < 64; ++iter) {
    auto [f1, f2] = F(x, y);
    if (!f1.is_finite() || !f2.is_finite()) {
      throw ConvergenceError("newton_solve_2d: residual non-finite",
                             x.to_string(30) + ", " + y.to_string(30), prev_trace);
    }
    Real norm = max(abs(f1), abs(f2));
    if (norm <= tol) {
      // Certify local quadratic behavior: each of the final (up to three)
      // meaningful steps must at least halve.
      Real floor = Real::pow2(-(ctx.bits - 8), wbits) * (abs(x) + abs(y) + 1);
      std::vector<Real> big;
      for (const auto& s : steps)
        if (s > floor) big.push_back(s);
      std::size_t nb = big.size();
      for (std::size_t i = (nb > 3 ? nb - 3 : 1); i < nb; ++i) {
        if (big[i] * 2 > big[i - 1]) {
          throw ConvergenceError("newton_solve_2d: residual met but final steps did not halve",
                                 x.to_string(30) + ", " + y.to_string(30), prev_trace);
        }
      }
      return {x, y};
    }
    if (last_norm.sign() >= 0 && norm > last_norm) {
      if (++growing >= 6) {
        throw ConvergenceError("newton_solve_2d: residual diverging",
                               x.to_string(30) + ", " + y.to_string(30), prev_trace);
      }
    } else {
      growing = 0;
    }
    last_norm = norm;

    auto j = J(x, y);
    Real det = j[0] * j[3] - j[1] * j[2];
    if (det.is_zero() || !det.is_finite()) {
      throw ConvergenceError("newton_solve_2d: singular Jacobian",
                             x.to_string(30) + ", " + y.to_string(30), prev_trace);
    }
    Real dx = (f1 * j[3] - f2 * j[1]) / det;
    Real dy = (j[0] * f2 - j[2] * f1) / det;
    prev_trace = x.to_string(30) + ", " + y.to_string(30);
    x -= dx;
    y -= dy;
    if (!x.is_finite() || !y.is_finite()) {
      throw ConvergenceError("newton_solve_2d: iterate non-finite", "(non-finite)", prev_trace);
    }
    steps.push_back(max(abs(dx), abs(dy)));
  }
  throw ConvergenceError("newton_solve_2d: max iterations (64) exceeded",
                         x.to_string(30) + ", " + y.to_string(30), prev_trace);
}

Real IdentityReport::max_relative_residual() const {
  Real m(64);
  for (const auto& r : residuals) m = max(m, r.relative_residual);
  return m;
}

IdentityReport verify_identity_suite(const EndpointPair& endpoints, const Real& t_shift,
                                     const PrecisionContext& ctx) {
  const long wbits = ctx.bits + 64;
  Real a(wbits), b(wbits), t(wbits);
  mpfr_set(a.raw(), endpoints.a.raw(), MPFR_RNDN);
  mpfr_set(b.raw(), endpoints.b.raw(), MPFR_RNDN);
  mpfr_set(t.raw(), t_shift.raw(), MPFR_RNDN);

  // A4/A5 place the pole at -t_shift and take log(x + t_shift); both need
  // x + t_shift > 0 on [a,b]. B1 has poles at 0 and t_shift.
  if (!(t > -a)) throw DomainError("identity suite: A4/A5 require t_shift > -a (pole left of support)");
  if (t.is_zero()) throw DomainError("identity suite: B1 requires t_shift != 0");
  if (t >= a && t <= b) throw DomainError("identity suite: B1 requires t_shift outside [a,b]");

  const Real pi_w = Real::pi(wbits);
  IdentityReport rep;

  auto add = [&](const std::string& name, const Integrand& g, const Real& closed) {
    Real q = integrate_finite_sqrt_weight(g, endpoints, ctx);
    Real res = abs(q - closed) / abs(closed);
    rep.residuals.push_back({name, q, closed, res});
  };

  add("A1", [](const Real& x) { return Real(1.0, x.prec()); }, pi_w);
  add("A2", [&](const Real& x) { return x; }, ldexp2(pi_w * (a + b), -1));
  add("A3", [&](const Real& x) { return 1 / (x * x); },
      pi_w * (a + b) / ldexp2(pow(a * b, Real(1.5, wbits)), 1));
  add("A4", [&](const Real& x) { return 1 / (x + t); },
      pi_w / sqrt((t + a) * (t + b)));
  {
    Real sab = sqrt(a * b);
    Real inner = sab + sqrt((t + a) * (t + b));
    Real closed = pi_w / sab * log((inner * inner - t * t) / pow(sqrt(a) + sqrt(b), 2L));
    add("A5", [&](const Real& x) { return log(x + t) / x; }, closed);
  }
  {
    // sqrt((t-a)(t-b)) on the branch continuous off the cut [a,b]: positive
    // for t > b, negative real for t < a.
    Real root = sqrt((t - a) * (t - b));
    if (t < a) root = -root;
    Real closed = -(pi_w / t) * (1 / sqrt(a * b) + 1 / root);
    add("B1", [&](const Real& x) { return 1 / (x * (x - t)); }, closed);
  }
  return rep;
}

}  // namespace splh

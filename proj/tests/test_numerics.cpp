#include <doctest.h>

#include <cmath>

#include "splh/numerics.hpp"

using namespace splh;

namespace {

Real rel_err(const Real& got, const Real& want) { return abs(got - want) / abs(want); }

// 2*K_1(2) to 70 digits, computed with an independent multiprecision library
// from the integral representation of the modified Bessel function.
const char* kTwoK1of2 =
    "0.2797317636330448545691976140708220477744691696830310607688841086371235";

}  // namespace

TEST_CASE("Real: construction, arithmetic, formatting") {
  Real a(1.5, 128);
  Real b(2.0, 192);
  CHECK((a + b).prec() == 192);
  CHECK((a * b).to_double() == doctest::Approx(3.0));
  CHECK((a - 3 * b).to_double() == doctest::Approx(-4.5));
  CHECK(Real::pow2(-10, 64).to_double() == doctest::Approx(std::ldexp(1.0, -10)));

  SUBCASE("decimal round trip") {
    Real x = sqrt(Real(2.0, 256));
    std::string s = x.to_string(decimal_digits_for_bits(256));
    Real y = Real::from_string(s, 256);
    CHECK(rel_err(y, x) < Real::pow2(-250, 64));
    CHECK(Real::from_string(x.to_string(40), 256).to_string(40) == x.to_string(40));
  }
  SUBCASE("formatting corners") {
    CHECK(Real(0.0, 64).to_string(5) == "0.0000e+0");
    CHECK(Real(-1.0, 64).to_string(3) == "-1.00e+0");
    CHECK(Real(1234.0, 64).to_string(4) == "1.234e+3");
    CHECK(Real(0.015625, 64).to_string(3) == "1.56e-2");
  }
  SUBCASE("gamma") {
    CHECK(rel_err(gamma(Real(5.0, 256)), Real(24.0, 256)) < Real::pow2(-250, 64));
  }
}

TEST_CASE("PrecisionContext invariants") {
  CHECK_NOTHROW(PrecisionContext(256, 240));
  CHECK_THROWS_AS(PrecisionContext(32, 16), ConfigError);       // bits < 64
  CHECK_THROWS_AS(PrecisionContext(256, 241), ConfigError);     // target unreachable
  CHECK_THROWS_AS(PrecisionContext(256, 0), ConfigError);
  CHECK_THROWS_AS(Interval(Real(2.0, 64), Real(1.0, 64)), DomainError);
  CHECK_THROWS_AS(EndpointPair(Real(-1.0, 64), Real(2.0, 64)), DomainError);
  CHECK_THROWS_AS(EndpointPair(Real(3.0, 64), Real(2.0, 64)), DomainError);
}

TEST_CASE("integrate_halfline") {
  PrecisionContext ctx(320, 256);
  const Real tol = ctx.tolerance();

  SUBCASE("exponential integral") {
    Real got = integrate_halfline([](const Real& x) { return exp(-x); }, ctx);
    CHECK(rel_err(got, Real(1.0, 320)) <= tol);
  }
  SUBCASE("endpoint singularity: Gamma(1/2)") {
    Real got = integrate_halfline(
        [](const Real& x) { return exp(-x) / sqrt(x); }, ctx);
    CHECK(rel_err(got, sqrt(Real::pi(320))) <= tol);
  }
  SUBCASE("essential singularity: modified Bessel value") {
    Real got = integrate_halfline(
        [](const Real& x) { return exp(-x - 1 / x); }, ctx);
    Real want = Real::from_string(kTwoK1of2, 320);
    CHECK(rel_err(got, want) <= Real::pow2(-220, 64));
  }
  SUBCASE("algebraic decay is still fine") {
    Real got = integrate_halfline([](const Real& x) { return 1 / (1 + x * x); }, ctx);
    CHECK(rel_err(got, ldexp2(Real::pi(320), -1)) <= tol);
  }
  SUBCASE("divergent integral raises with the last two estimates") {
    PrecisionContext fast(128, 96);
    try {
      integrate_halfline([](const Real& x) { return 1 / (1 + x); }, fast);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(!e.last_estimate.empty());
    }
  }
}

TEST_CASE("integrate_finite_sqrt_weight") {
  PrecisionContext ctx(320, 256);
  const Real tol = ctx.tolerance();
  const Real pi = Real::pi(320);

  SUBCASE("printed closed forms") {
    EndpointPair e13{Real(1.0, 320), Real(3.0, 320)};
    Real a1 = integrate_finite_sqrt_weight(
        [](const Real& x) { return Real(1.0, x.prec()); }, e13, ctx);
    CHECK(rel_err(a1, pi) <= tol);

    Real a2 = integrate_finite_sqrt_weight([](const Real& x) { return x; }, e13, ctx);
    CHECK(rel_err(a2, 2 * pi) <= tol);

    EndpointPair e14{Real(1.0, 320), Real(4.0, 320)};
    Real a3 = integrate_finite_sqrt_weight(
        [](const Real& x) { return 1 / (x * x); }, e14, ctx);
    CHECK(rel_err(a3, 5 * pi / 16) <= tol);
  }

  SUBCASE("substitution exactness: constant integrand gives pi for any endpoints") {
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
      state ^= state << 13; state ^= state >> 7; state ^= state << 17;
      return static_cast<double>(state % 100000) / 1000.0 + 0.01;
    };
    for (int i = 0; i < 5; ++i) {
      double a = next();
      double b = a + next();
      EndpointPair e{Real(a, 320), Real(b, 320)};
      Real got = integrate_finite_sqrt_weight(
          [](const Real& x) { return Real(1.0, x.prec()); }, e, ctx);
      CHECK(rel_err(got, pi) <= tol);
    }
  }

  SUBCASE("non-finite integrand inside the support") {
    EndpointPair e{Real(1.0, 320), Real(3.0, 320)};
    CHECK_THROWS_AS(integrate_finite_sqrt_weight(
                        [](const Real& x) { return log(x - 2); }, e, ctx),
                    DomainError);
  }
}

TEST_CASE("quadrature refinement monotonicity") {
  PrecisionContext ctx(320, 256);
  EndpointPair e{Real(1.0, 320), Real(2.0, 320)};
  const Real t(3.0, 320);
  // The six identity-suite integrands.
  std::vector<std::pair<const char*, Integrand>> integrands = {
      {"A1", [](const Real& x) { return Real(1.0, x.prec()); }},
      {"A2", [](const Real& x) { return x; }},
      {"A3", [](const Real& x) { return 1 / (x * x); }},
      {"A4", [&t](const Real& x) { return 1 / (x + t); }},
      {"A5", [&t](const Real& x) { return log(x + t) / x; }},
      {"B1", [&t](const Real& x) { return 1 / (x * (x - t)); }},
  };
  const double log2_10 = std::log2(10.0);
  for (auto& [name, g] : integrands) {
    CAPTURE(name);
    QuadratureDiagnostics diag;
    integrate_finite_sqrt_weight(g, e, ctx, &diag);
    REQUIRE(!diag.level_error_log2.empty());
    // Each recorded two-level difference shrinks by at least 10x per level
    // once past the first recorded pair.
    for (std::size_t i = 2; i < diag.level_error_log2.size(); ++i) {
      CHECK(diag.level_error_log2[i] <= diag.level_error_log2[i - 1] - log2_10);
    }
  }
}

TEST_CASE("a corrupted closed form is detectable at full tolerance") {
  // Guard for the verifier itself: flipping the sign of the second B1 term
  // moves the closed form far outside the certified quadrature band.
  PrecisionContext ctx(320, 256);
  EndpointPair e{Real(1.0, 320), Real(2.0, 320)};
  Real t(3.0, 320);
  Real quad = integrate_finite_sqrt_weight(
      [&t](const Real& x) { return 1 / (x * (x - t)); }, e, ctx);
  Real pi_w = Real::pi(384);
  Real tail = 1 / sqrt((t - 1) * (t - 2));
  Real good = -(pi_w / t) * (1 / sqrt(Real(2.0, 384)) + tail);
  Real corrupted = -(pi_w / t) * (1 / sqrt(Real(2.0, 384)) - tail);
  CHECK(abs(quad - good) / abs(good) <= ctx.tolerance());
  CHECK(abs(quad - corrupted) / abs(corrupted) > Real(0.1, 64));
}

TEST_CASE("verify_identity_suite") {
  PrecisionContext ctx(320, 256);
  const Real tol = ctx.tolerance();

  SUBCASE("reference instance (1,2), shift 3") {
    IdentityReport rep =
        verify_identity_suite(EndpointPair{Real(1.0, 320), Real(2.0, 320)}, Real(3.0, 320), ctx);
    REQUIRE(rep.residuals.size() == 6);
    CHECK(rep.residuals[0].name == "A1");
    CHECK(rep.residuals[5].name == "B1");
    CHECK(rep.max_relative_residual() <= tol);
  }
  SUBCASE("pole left of the support") {
    IdentityReport rep = verify_identity_suite(EndpointPair{Real(1.0, 320), Real(2.0, 320)},
                                               Real(-0.5, 320), ctx);
    CHECK(rep.max_relative_residual() <= tol);
  }
  SUBCASE("pole inside the support is rejected by name") {
    try {
      verify_identity_suite(EndpointPair{Real(1.0, 320), Real(2.0, 320)}, Real(1.5, 320), ctx);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("B1") != std::string::npos);
    }
  }
  SUBCASE("randomized family, endpoints up to 100") {
    std::uint64_t state = 0xdeadbeef12345678ull;
    auto unit = [&state]() {
      state ^= state << 13; state ^= state >> 7; state ^= state << 17;
      return static_cast<double>(state % 1000003) / 1000003.0;
    };
    for (int i = 0; i < 8; ++i) {
      double a = 0.05 + 99.0 * unit() * unit();
      double b = a + 0.1 + (100.0 - a) * unit();
      double ts = (i % 2 == 0) ? b + 0.1 + 40.0 * unit() : -0.5 * a;
      IdentityReport rep = verify_identity_suite(
          EndpointPair{Real(a, 320), Real(b, 320)}, Real(ts, 320), ctx);
      CHECK(rep.max_relative_residual() <= tol);
    }
  }
}

TEST_CASE("newton_solve_2d") {
  PrecisionContext ctx(256, 200);

  SUBCASE("affine system lands exactly") {
    auto [x, y] = newton_solve_2d(
        [](const Real& x, const Real& y) { return std::pair(x - 1, y - 2); },
        [](const Real& x, const Real& y) {
          return std::array<Real, 4>{Real(1.0, x.prec()), Real(0.0, x.prec()),
                                     Real(0.0, y.prec()), Real(1.0, y.prec())};
        },
        {Real(0.9, 256), Real(2.1, 256)}, ctx, Real(1.0, 256));
    CHECK(rel_err(x, Real(1.0, 256)) <= ctx.tolerance());
    CHECK(rel_err(y, Real(2.0, 256)) <= ctx.tolerance());
  }

  SUBCASE("nonlinear system is self-certifying") {
    auto F = [](const Real& x, const Real& y) {
      return std::pair(x * x + y * y - 4, x * y - 1);
    };
    auto J = [](const Real& x, const Real& y) {
      return std::array<Real, 4>{2 * x, 2 * y, y, x};
    };
    auto [x, y] = newton_solve_2d(F, J, {Real(1.9, 256), Real(0.6, 256)}, ctx, Real(1.0, 256));
    auto [f1, f2] = F(x, y);
    CHECK(abs(f1) <= ctx.tolerance());
    CHECK(abs(f2) <= ctx.tolerance());
  }

  SUBCASE("cube-root oscillation diverges") {
    auto F = [](const Real& x, const Real& y) { return std::pair(cbrt(x), y - 1); };
    auto J = [](const Real& x, const Real& y) {
      Real c = cbrt(x);
      return std::array<Real, 4>{1 / (3 * c * c), Real(0.0, x.prec()),
                                 Real(0.0, y.prec()), Real(1.0, y.prec())};
    };
    CHECK_THROWS_AS(
        newton_solve_2d(F, J, {Real(1.0, 256), Real(5.0, 256)}, ctx, Real(1.0, 256)),
        ConvergenceError);
  }
}

#include <doctest.h>

#include "splh/moments.hpp"

using namespace splh;

namespace {

Real rel_err(const Real& got, const Real& want) { return abs(got - want) / abs(want); }

// Independent multiprecision oracle values (integral representation of the
// modified Bessel function): mu_0, mu_1 at alpha=0, t=1.
const char* kMu0_a0t1 =
    "0.2797317636330448545691976140708220477744691696830310607688841086371235";
const char* kMu1_a0t1 =
    "0.5075195091321117258746367639357857137711224184606488265539436885924499";

const PrecisionContext kCtx{320, 256};

}  // namespace

TEST_CASE("weight_eval") {
  CHECK(rel_err(weight_eval(Real(1.0, 320), WeightParams(0, 0), 320),
                exp(Real(-1.0, 320))) <= Real::pow2(-300, 64));
  CHECK(rel_err(weight_eval(Real(1.0, 320), WeightParams(2, 1), 320),
                exp(Real(-2.0, 320))) <= Real::pow2(-300, 64));
  // (x=2, alpha=-1/2, t=0.3) -> 2^{-1/2} e^{-2-0.3/2}
  Real want = exp(-2 - Real(0.3, 320) / 2) / sqrt(Real(2.0, 320));
  CHECK(rel_err(weight_eval(Real(2.0, 320), WeightParams(-0.5, 0.3), 320), want) <=
        Real::pow2(-300, 64));
  CHECK_THROWS_AS(weight_eval(Real(0.0, 64), WeightParams(0, 0), 64), DomainError);
  CHECK_THROWS_AS(weight_eval(Real(-1.0, 64), WeightParams(0, 0), 64), DomainError);

  SUBCASE("underflow regime returns zero") {
    Real tiny = Real::pow2(-100000, 128);
    CHECK(weight_eval(tiny, WeightParams(0, 1), 128).is_zero());
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(WeightParams(-1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(WeightParams(0.0, -0.1), ConfigError);
  }
}

TEST_CASE("potential_derivatives") {
  SUBCASE("t=0 saddle sits at alpha+k") {
    auto pd = potential_derivatives(Real(2.0, 320), WeightParams(0, 0), 5, kCtx);
    CHECK(rel_err(pd.saddle, Real(5.0, 320)) <= Real::pow2(-250, 64));
    auto at_saddle = potential_derivatives(pd.saddle, WeightParams(0, 0), 5, kCtx);
    CHECK(rel_err(at_saddle.v_double_prime, 1 / Real(5.0, 320)) <= Real::pow2(-250, 64));
  }
  SUBCASE("saddle solves the quadratic x^2 - (alpha+k)x - t = 0") {
    auto pd = potential_derivatives(Real(1.0, 320), WeightParams(1, 3), 3, kCtx);
    Real want = ldexp2(Real(4.0, 320) + sqrt(Real(28.0, 320)), -1);
    CHECK(rel_err(pd.saddle, want) <= Real::pow2(-250, 64));
    auto at_saddle = potential_derivatives(pd.saddle, WeightParams(1, 3), 3, kCtx);
    CHECK(abs(at_saddle.v_prime) <= Real::pow2(-150, 64));
  }
  SUBCASE("t>0 always has an interior saddle; v'(x0)=0 there") {
    auto pd = potential_derivatives(Real(1.0, 320), WeightParams(0, 1), 0, kCtx);
    CHECK(rel_err(pd.saddle, Real(1.0, 320)) <= Real::pow2(-250, 64));
  }
  SUBCASE("degenerate root at the origin reports saddle absent") {
    CHECK_THROWS_AS(potential_derivatives(Real(1.0, 320), WeightParams(-0.5, 0), 0, kCtx),
                    DomainError);
  }
  SUBCASE("derivative formulas at a generic point") {
    Real x(0.75, 320);
    auto pd = potential_derivatives(x, WeightParams(0.5, 2), 4, kCtx);
    Real ak(4.5, 320), t(2.0, 320);
    CHECK(rel_err(pd.v, x + t / x - ak * log(x)) <= Real::pow2(-250, 64));
    CHECK(rel_err(pd.v_prime, 1 - t / (x * x) - ak / x) <= Real::pow2(-250, 64));
    CHECK(rel_err(pd.v_double_prime, 2 * t / (x * x * x) + ak / (x * x)) <=
          Real::pow2(-250, 64));
  }
}

TEST_CASE("compute_moment_table") {
  SUBCASE("t=0 factorials") {
    MomentTable t = compute_moment_table(WeightParams(0, 0), 6, kCtx);
    long want[] = {1, 1, 2, 6, 24, 120, 720};
    REQUIRE(t.K() == 6);
    for (int k = 0; k <= 6; ++k) {
      CHECK(rel_err(t.values[k], Real(want[k], 320)) <= Real::pow2(-250, 64));
    }
    CHECK(t.seed_method == "gamma-recurrence");
  }
  SUBCASE("t=0 gamma closure at half-integer alpha") {
    MomentTable t = compute_moment_table(WeightParams(0.5, 0), 3, kCtx);
    for (int k = 0; k <= 3; ++k) {
      CHECK(rel_err(t.values[k], gamma(Real(k + 1.5, 320))) <= Real::pow2(-250, 64));
    }
  }
  SUBCASE("Bessel seeds and recurrence, alpha=0 t=1") {
    MomentTable t = compute_moment_table(WeightParams(0, 1), 2, kCtx);
    CHECK(t.seed_method == "quadrature");
    CHECK(rel_err(t.values[0], Real::from_string(kMu0_a0t1, 320)) <= Real::pow2(-220, 64));
    CHECK(rel_err(t.values[1], Real::from_string(kMu1_a0t1, 320)) <= Real::pow2(-220, 64));
    // mu_2 = 2 mu_1 + mu_0 cross-checked against direct quadrature.
    Real direct = spot_check_moment(WeightParams(0, 1), 2, kCtx);
    CHECK(rel_err(t.values[2], direct) <= Real::pow2(-220, 64));
    CHECK(rel_err(t.values[2], 2 * t.values[1] + t.values[0]) <= Real::pow2(-250, 64));
  }
  SUBCASE("tiny t collapses to the gamma route with a flag") {
    MomentTable t = compute_moment_table(WeightParams(0, 1e-60), 4, kCtx);
    CHECK(t.seed_method == "gamma-recurrence");
  }
  SUBCASE("alpha near the integrability edge is flagged") {
    MomentTable t = compute_moment_table(WeightParams(-0.97, 0.5), 2, kCtx);
    CHECK(t.slow_convergence_warning);
    CHECK(t.values[0] > 0);
  }
  SUBCASE("K below 2 is rejected") {
    CHECK_THROWS_AS(compute_moment_table(WeightParams(0, 0), 1, kCtx), DomainError);
  }
}

TEST_CASE("moment table invariants") {
  for (double alpha : {0.0, 0.5, -0.5}) {
    for (double tt : {0.0, 0.1, 1.0}) {
      CAPTURE(alpha);
      CAPTURE(tt);
      MomentTable table = compute_moment_table(WeightParams(alpha, tt), 60, kCtx);
      const Real half_bits = Real::pow2(-table.bits / 2, 64);
      Real a(alpha, 320), t(tt, 320);
      for (long k = 1; k + 1 <= table.K(); ++k) {
        // Three-term relation within 2^-bits/2 relative.
        Real lhs = table.values[k + 1];
        Real rhs = (a + (k + 1)) * table.values[k] + t * table.values[k - 1];
        CHECK(rel_err(lhs, rhs) <= half_bits);
        // Strict log-convexity of a positive measure's moments.
        CHECK(table.values[k - 1] * table.values[k + 1] > table.values[k] * table.values[k]);
      }
      for (const auto& v : table.values) CHECK(v > 0);
    }
  }
}

TEST_CASE("spot checks against the recurrence") {
  SUBCASE("pure factorial") {
    Real got = spot_check_moment(WeightParams(0, 0), 10, kCtx);
    CHECK(rel_err(got, Real(3628800.0, 320)) <= kCtx.tolerance());
  }
  SUBCASE("recurrence vs quadrature at alpha=0, t=1, k=7") {
    MomentTable table = compute_moment_table(WeightParams(0, 1), 8, kCtx);
    Real direct = spot_check_moment(WeightParams(0, 1), 7, kCtx);
    CHECK(rel_err(table.values[7], direct) <= Real::pow2(-(kCtx.quad_tolerance_exponent - 8), 64));
  }
  SUBCASE("near-singular endpoint stays finite") {
    Real got = spot_check_moment(WeightParams(-0.9, 0.01), 0, kCtx);
    CHECK(got > 0);
    CHECK(got.is_finite());
  }
  SUBCASE("negative k is rejected") {
    CHECK_THROWS_AS(spot_check_moment(WeightParams(0, 0), -1, kCtx), DomainError);
  }
}

TEST_CASE("large-order Bessel ratio approaches the gamma limit") {
  // K_nu(t) ~ Gamma(nu)/2 (t/2)^-nu for fixed t and large nu, so
  // mu_k / Gamma(alpha+k+1) -> 1; the first correction is ~ t/(alpha+k).
  PrecisionContext ctx(640, 600);
  MomentTable table = compute_moment_table(WeightParams(0, 1), 200, ctx);
  Real ratio = table.values[200] / gamma(Real(201.0, 704));
  CHECK(abs(ratio - 1) < Real(0.01, 64));
  CHECK(abs(ratio - 1) > Real(0.001, 64));  // correction really is ~ 1/200
}

TEST_CASE("moment table JSON round trip") {
  MomentTable table = compute_moment_table(WeightParams(0.5, 1), 12, kCtx);
  std::string doc = moment_table_to_json(table);
  MomentTable back = moment_table_from_json(doc);
  CHECK(back.params.alpha == table.params.alpha);
  CHECK(back.params.t == table.params.t);
  CHECK(back.bits == table.bits);
  CHECK(back.K() == table.K());
  CHECK(back.strings == table.strings);
  CHECK(moment_table_to_json(back) == doc);

  SUBCASE("values parse back to the canonical binary values") {
    for (long k = 0; k <= table.K(); ++k) {
      CHECK(back.values[k] == table.values[k]);
    }
  }
  SUBCASE("extension across the cache seam satisfies the recurrence") {
    extend_moment_table(back, 20);
    Real a(0.5, 320), t(1.0, 320);
    for (long k = 11; k + 1 <= 20; ++k) {
      Real rhs = (a + (k + 1)) * back.values[k] + t * back.values[k - 1];
      CHECK(rel_err(back.values[k + 1], rhs) <= Real::pow2(-back.bits / 2, 64));
    }
  }
}

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "splh/numerics.hpp"
#include "splh/real.hpp"

namespace splh {

/// Parameters of the weight x^alpha * exp(-x - t/x) on (0, inf).
struct WeightParams {
  double alpha;
  double t;

  WeightParams(double alpha_, double t_) : alpha(alpha_), t(t_) {
    if (!(alpha > -1.0)) throw ConfigError("WeightParams: alpha must be > -1");
    if (!(t >= 0.0)) throw ConfigError("WeightParams: t must be >= 0");
  }
};

/// mu_0..mu_K at a stated precision, with a record of how the seeds were made.
struct MomentTable {
  WeightParams params;
  std::vector<Real> values;          // canonical values (parsed back from strings)
  std::vector<std::string> strings;  // pinned decimal serialization of each entry
  long bits = 0;
  std::string seed_method;           // "quadrature" | "gamma-recurrence" | "cache"
  bool slow_convergence_warning = false;  // alpha < -0.95

  long K() const { return static_cast<long>(values.size()) - 1; }
};

/// x^alpha * exp(-x - t/x) at precision `prec`; 0 in the deep underflow
/// regime x -> 0+ with t > 0. Throws DomainError for x <= 0.
Real weight_eval(const Real& x, const WeightParams& p, long prec);

/// v, v', v'' of the Laplace exponent v(x) = x + t/x - (alpha+k) log x,
/// plus the saddle x0 solving v'(x0) = 0.
struct PotentialDerivatives {
  Real v;
  Real v_prime;
  Real v_double_prime;
  Real saddle;  // x0 = (alpha+k + sqrt((alpha+k)^2 - 4t)) / 2
};

/// Throws DomainError when (alpha+k)^2 < 4t (no real saddle).
PotentialDerivatives potential_derivatives(const Real& x, const WeightParams& p, long k,
                                           const PrecisionContext& ctx);

/// Moment table mu_0..mu_K. Seeds mu_0, mu_1 come from half-line quadrature
/// at bits+64 guard precision; the rest follow the forward recurrence
/// mu_{k+1} = (alpha+k+1) mu_k + t mu_{k-1}, which is dominant-solution
/// stable because mu_k grows factorially. At t = 0 (or t below 2^-bits/2,
/// which is flagged) the table comes from the gamma recurrence directly.
MomentTable compute_moment_table(const WeightParams& p, long K, const PrecisionContext& ctx);

/// mu_k by direct quadrature, independent of the recurrence.
Real spot_check_moment(const WeightParams& p, long k, const PrecisionContext& ctx);

/// Extends a table in place to K entries via the forward recurrence.
void extend_moment_table(MomentTable& table, long K);

/// JSON document {alpha, t, bits, K, values}; byte-stable for identical tables.
std::string moment_table_to_json(const MomentTable& table);
MomentTable moment_table_from_json(const std::string& text);

}  // namespace splh

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "splh/real.hpp"

namespace splh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// Configuration / CLI validation failure.
struct ConfigError : Error {
  using Error::Error;
};

/// An iterative scheme failed to reach its tolerance.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, std::string last, std::string prev)
      : Error(msg), last_estimate(std::move(last)), prev_estimate(std::move(prev)) {}
  std::string last_estimate;
  std::string prev_estimate;
};

/// Working precision was insufficient (e.g. a Cholesky pivot went nonpositive).
struct PrecisionError : Error {
  PrecisionError(const std::string& msg, long pivot, double log2_pivot)
      : Error(msg), pivot_index(pivot), pivot_log2(log2_pivot) {}
  long pivot_index;
  double pivot_log2;
};

/// A configured resource ceiling (precision, escalations) was exceeded.
struct ResourceError : Error {
  using Error::Error;
};

/// Mantissa bits plus the quadrature accuracy target 2^-quad_tolerance_exponent.
struct PrecisionContext {
  long bits;
  long quad_tolerance_exponent;

  PrecisionContext(long bits_, long quad_tol_exp)
      : bits(bits_), quad_tolerance_exponent(quad_tol_exp) {
    if (bits < 64) throw ConfigError("PrecisionContext: bits must be >= 64");
    if (quad_tolerance_exponent <= 0)
      throw ConfigError("PrecisionContext: quad_tolerance_exponent must be positive");
    if (quad_tolerance_exponent > bits - 16)
      throw ConfigError("PrecisionContext: quadrature target unreachable, need exponent <= bits-16");
  }

  /// Context with the tightest admissible quadrature target for `b` bits.
  static PrecisionContext for_bits(long b) { return PrecisionContext(b, b - 16); }

  Real tolerance() const { return Real::pow2(-quad_tolerance_exponent, bits); }
};

struct Interval {
  Real lo;
  Real hi;
  Interval(Real l, Real h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw DomainError("Interval: lo > hi");
  }
  Real width() const { return hi - lo; }
  Real midpoint() const { return ldexp2(lo + hi, -1); }
};

/// Support endpoints 0 < a < b of the equilibrium measure.
struct EndpointPair {
  Real a;
  Real b;
  EndpointPair(Real a_, Real b_) : a(std::move(a_)), b(std::move(b_)) {
    if (!(a > 0) || !(b > a)) throw DomainError("EndpointPair: need 0 < a < b");
  }
};

struct QuadratureDiagnostics {
  std::vector<double> level_error_log2;  // log2 of successive-level differences
  int levels_used = 0;
  long evaluations = 0;
};

using Integrand = std::function<Real(const Real&)>;

/// Integral of f over (0, inf) via a double-exponential variable transform.
///
/// f must be continuous on (0,inf), decay at least exponentially at infinity
/// and be absolutely integrable near 0 (an integrable algebraic singularity
/// is fine). The result carries relative error <= 2^-quad_tolerance_exponent,
/// certified by agreement of two successive refinement levels.
Real integrate_halfline(const Integrand& f, const PrecisionContext& ctx,
                        QuadratureDiagnostics* diag = nullptr);

/// Integral of g(x)/sqrt((b-x)(x-a)) over [a,b]. The endpoint singularities
/// are removed exactly by x = (a+b)/2 + ((b-a)/2) sin(theta) before applying
/// an equispaced rule on the periodized integrand.
Real integrate_finite_sqrt_weight(const Integrand& g, const EndpointPair& endpoints,
                                  const PrecisionContext& ctx,
                                  QuadratureDiagnostics* diag = nullptr);

using Fn2 = std::function<std::pair<Real, Real>(const Real&, const Real&)>;
/// Jacobian entries in row-major order: dF1/dx, dF1/dy, dF2/dx, dF2/dy.
using Jacobian2 = std::function<std::array<Real, 4>(const Real&, const Real&)>;

/// Damped Newton iteration for a 2x2 system with analytic Jacobian.
/// Terminates when max(|F1|,|F2|) <= 2^-quad_tolerance_exponent * scale; the
/// final three steps (when that many occur above the rounding floor) must
/// each at least halve, otherwise convergence is not certified.
std::pair<Real, Real> newton_solve_2d(const Fn2& F, const Jacobian2& J,
                                      std::pair<Real, Real> start,
                                      const PrecisionContext& ctx, const Real& scale);

struct IdentityResidual {
  std::string name;       // "A1".."A5", "B1"
  Real quadrature;
  Real closed_form;
  Real relative_residual;
};

struct IdentityReport {
  std::vector<IdentityResidual> residuals;  // always 6 entries, A1..A5, B1
  Real max_relative_residual() const;
};

/// Evaluates the six closed-form integral identities over [a,b] with shift
/// parameter t_shift and returns the relative residual of each against
/// quadrature. Preconditions: -t_shift outside [a,b] and t_shift > -a for
/// A4/A5 (pole and log branch), t_shift nonzero and outside [a,b] for B1.
IdentityReport verify_identity_suite(const EndpointPair& endpoints, const Real& t_shift,
                                     const PrecisionContext& ctx);

}  // namespace splh

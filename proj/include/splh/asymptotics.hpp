#pragma once

#include <string>

#include "splh/moments.hpp"
#include "splh/numerics.hpp"

namespace splh {

/// Truncated-series endpoints a_N, b_N of the equilibrium support.
struct EndpointExpansion {
  Real a_N;
  Real b_N;
  int order_used;
  bool includes_quartic_a_term;  // the 5 alpha^3 / (81 t^{1/3} (2N+alpha)^{4/3}) term
};

/// Solves the Coulomb-fluid endpoint system
///   (a+b)/2 - t/sqrt(ab) - alpha = 2N
///   1 - t(a+b)/(2(ab)^{3/2}) - alpha/sqrt(ab) = 0
/// by Newton iteration started from the series values. Requires t > 0 or
/// (t = 0 and alpha > 0); the hard-edge case t = alpha = 0 has a = 0 exactly
/// and is rejected (callers use a=0, b=4N+2alpha).
EndpointPair solve_endpoints_exact(const WeightParams& p, long N, const PrecisionContext& ctx);

struct HardEdgeError : DomainError {
  using DomainError::DomainError;
};

/// Printed truncated series for a_N and b_N, term by term.
EndpointExpansion endpoint_expansion(const WeightParams& p, long N, bool include_quartic,
                                     long prec);

/// Orthonormal-polynomial value at real z < a from the consolidated
/// three-factor asymptotic form (growth power, quarter-power bracket,
/// alpha-log and t exponential corrections), on the branch where every
/// radical of a-z, b-z is the positive real root.
Real pn_full(const Real& z, const WeightParams& p, long N, const EndpointPair& endpoints,
             long prec);

/// Intermediate eta-form: eta = -z/(b-a), valid for |eta| < 1, z < 0.
Real pn_eta_form(const Real& z, const WeightParams& p, long N, const EndpointPair& endpoints,
                 long prec);

/// Fully simplified large-N form at z < 0 (the small-|eta| limit).
Real pn_simplified(const Real& z, const WeightParams& p, long N, const EndpointPair& endpoints,
                   long prec);

enum class PredictionVariant { ProofForm, TheoremForm, T0Alpha, T0Szego };

std::string variant_name(PredictionVariant v);
PredictionVariant variant_from_name(const std::string& s);

struct LambdaPrediction {
  Real value;
  PredictionVariant variant;
};

/// Smallest-eigenvalue prediction.
///   proof-form   : 8 pi^{3/2} [(4N+2a)^{1/2} + t/(2 sqrt(a_N)) - t/2]^{1/2}
///                  exp[1 + t - 2(4N+2a)^{1/2} - t/sqrt(a_N)]
///   theorem-form : same with bracket term -2t instead of -t/2
///   t0-alpha     : 2^{13/4} pi^{3/2} e (2N+a)^{1/4} exp[-2^{3/2}(2N+a)^{1/2}]
///   t0-szego     : 2^{7/2} pi^{3/2} e N^{1/4} exp[-4 sqrt(N)]
/// The two general forms require t > 0 (a_N from the quartic expansion);
/// the t0 forms require t = 0.
LambdaPrediction lambda_prediction(const WeightParams& p, long N, PredictionVariant variant,
                                   long prec);

/// Diagonal circle-kernel asymptotic at index mu within the window
/// N - sqrt(N) <= mu <= N.
Real kernel_diag_asymptotic(const WeightParams& p, long N_total, long mu, long prec);

}  // namespace splh

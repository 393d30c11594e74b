#include "splh/moments.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace splh {

Real weight_eval(const Real& x, const WeightParams& p, long prec) {
  if (!(x > 0)) throw DomainError("weight_eval: x must be positive");
  Real xa(prec);
  mpfr_set(xa.raw(), x.raw(), MPFR_RNDN);
  Real alpha(p.alpha, prec);
  Real t(p.t, prec);
  Real expo = -xa;
  if (p.t != 0.0) expo -= t / xa;
  if (p.alpha == 0.0) return exp(expo);
  return pow(xa, alpha) * exp(expo);
}

PotentialDerivatives potential_derivatives(const Real& x, const WeightParams& p, long k,
                                           const PrecisionContext& ctx) {
  if (!(x > 0)) throw DomainError("potential_derivatives: x must be positive");
  const long w = ctx.bits;
  Real xx(w), ak(p.alpha, w), t(p.t, w);
  mpfr_set(xx.raw(), x.raw(), MPFR_RNDN);
  ak += k;
  // v'(x) = 1 - t/x^2 - (alpha+k)/x vanishes where x^2 - (alpha+k)x - t = 0,
  // so the discriminant is (alpha+k)^2 + 4t; only the larger root can lie in
  // (0, inf), and it degenerates to 0 when t = 0 and alpha+k <= 0.
  Real disc = ak * ak + 4 * t;
  if (disc.sign() < 0) {
    throw DomainError("potential_derivatives: no real saddle");
  }
  Real x0 = ldexp2(ak + sqrt(disc), -1);
  if (!(x0 > 0)) {
    throw DomainError("potential_derivatives: saddle not in (0,inf)");
  }
  PotentialDerivatives out{
      xx + t / xx - ak * log(xx),
      1 - t / (xx * xx) - ak / xx,
      2 * t / (xx * xx * xx) + ak / (xx * xx),
      x0,
  };
  Real vp0 = 1 - t / (x0 * x0) - ak / x0;
  Real scale = 1 + abs(ak) / x0 + t / (x0 * x0);
  if (abs(vp0) > Real::pow2(-ctx.bits / 2, w) * scale) {
    throw Error("potential_derivatives: saddle residual check failed");
  }
  return out;
}

namespace {

void canonicalize(MomentTable& table) {
  const std::size_t digits = decimal_digits_for_bits(table.bits);
  const long wbits = table.bits + 64;
  table.strings.clear();
  table.strings.reserve(table.values.size());
  for (auto& v : table.values) {
    std::string s = v.to_string(digits);
    table.strings.push_back(s);
    v = Real::from_string(s, wbits);
    if (!(v > 0)) throw Error("moment table: nonpositive entry after canonicalization");
  }
}

void recurrence_extend(std::vector<Real>& mu, const WeightParams& p, long K, long wbits) {
  Real alpha(p.alpha, wbits), t(p.t, wbits);
  while (static_cast<long>(mu.size()) <= K) {
    const long k = static_cast<long>(mu.size()) - 1;
    Real next = (alpha + (k + 1)) * mu[k];
    if (p.t != 0.0 && k >= 1) next += t * mu[k - 1];
    mu.push_back(std::move(next));
  }
}

}  // namespace

MomentTable compute_moment_table(const WeightParams& p, long K, const PrecisionContext& ctx) {
  if (K < 2) throw DomainError("compute_moment_table: K must be >= 2");
  const long wbits = ctx.bits + 64;
  MomentTable table{p, {}, {}, ctx.bits, "", p.alpha < -0.95, };

  // Below this threshold the Bessel-moment structure is numerically
  // indistinguishable from the t=0 gamma closure at the working precision.
  const bool collapse_t =
      p.t == 0.0 || p.t < std::ldexp(1.0, static_cast<int>(-std::min(ctx.bits / 2, 1000L)));

  if (collapse_t) {
    table.seed_method = "gamma-recurrence";
    Real alpha(p.alpha, wbits);
    std::vector<Real> mu;
    mu.push_back(gamma(alpha + 1));
    WeightParams p0(p.alpha, 0.0);
    recurrence_extend(mu, p0, K, wbits);
    table.values = std::move(mu);
  } else {
    table.seed_method = "quadrature";
    PrecisionContext seed_ctx(wbits, ctx.bits + 16);
    std::vector<Real> mu;
    mu.push_back(spot_check_moment(p, 0, seed_ctx));
    mu.push_back(spot_check_moment(p, 1, seed_ctx));
    recurrence_extend(mu, p, K, wbits);
    table.values = std::move(mu);
  }
  canonicalize(table);
  return table;
}

Real spot_check_moment(const WeightParams& p, long k, const PrecisionContext& ctx) {
  if (k < 0) throw DomainError("spot_check_moment: k must be >= 0");
  WeightParams pk(p.alpha + static_cast<double>(k), p.t);
  return integrate_halfline(
      [&](const Real& x) { return weight_eval(x, pk, x.prec()); }, ctx);
}

void extend_moment_table(MomentTable& table, long K) {
  if (K <= table.K()) return;
  const long wbits = table.bits + 64;
  WeightParams p = table.params;
  if (table.seed_method == "gamma-recurrence") p = WeightParams(p.alpha, 0.0);
  recurrence_extend(table.values, p, K, wbits);
  canonicalize(table);
}

std::string moment_table_to_json(const MomentTable& table) {
  nlohmann::ordered_json j;
  j["alpha"] = table.params.alpha;
  j["t"] = table.params.t;
  j["bits"] = table.bits;
  j["K"] = table.K();
  j["values"] = table.strings;
  return j.dump();
}

MomentTable moment_table_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  WeightParams p(j.at("alpha").get<double>(), j.at("t").get<double>());
  MomentTable table{p, {}, {}, j.at("bits").get<long>(), "cache", p.alpha < -0.95};
  const long wbits = table.bits + 64;
  auto vals = j.at("values").get<std::vector<std::string>>();
  if (static_cast<long>(vals.size()) != j.at("K").get<long>() + 1) {
    throw ConfigError("moment table JSON: K does not match values length");
  }
  for (const auto& s : vals) {
    table.strings.push_back(s);
    table.values.push_back(Real::from_string(s, wbits));
  }
  return table;
}

}  // namespace splh

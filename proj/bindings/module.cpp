#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "splh/asymptotics.hpp"
#include "splh/cli.hpp"
#include "splh/eigen.hpp"
#include "splh/hankel.hpp"
#include "splh/moments.hpp"
#include "splh/numerics.hpp"

namespace py = pybind11;
using namespace splh;

namespace {

constexpr std::size_t kDigits = 40;

long bits_for(double alpha, double t, long N, long bits) {
  return bits > 0 ? bits : precision_policy(N, WeightParams(alpha, t));
}

EndpointPair endpoints_for(const WeightParams& p, long N, long bits) {
  if (p.t == 0.0 && p.alpha == 0.0) {
    // Hard edge: the formulas take a -> 0+, which is singular; callers use
    // the expansion instead. Keep a representable sliver out of the API.
    throw DomainError("hard edge t=0, alpha=0: endpoints are a=0, b=4N");
  }
  return solve_endpoints_exact(p, N, PrecisionContext(bits, bits - 16));
}

}  // namespace

PYBIND11_MODULE(_splh, m) {
  m.doc() = "Certified smallest eigenvalues of Hankel matrices for the weight "
            "x^alpha exp(-x - t/x), with the matching asymptotic predictions. "
            "High-precision values cross the boundary as decimal strings.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  m.def(
      "moments",
      [](double alpha, double t, long K, long bits) {
        MomentTable tab = compute_moment_table(WeightParams(alpha, t), K,
                                               PrecisionContext(bits, bits - 16));
        return tab.strings;
      },
      py::arg("alpha"), py::arg("t"), py::arg("K"), py::arg("bits") = 256,
      "mu_0..mu_K as decimal strings (quadrature-seeded recurrence).");

  m.def(
      "spot_check_moment",
      [](double alpha, double t, long k, long bits) {
        return spot_check_moment(WeightParams(alpha, t), k, PrecisionContext(bits, bits - 16))
            .to_string(kDigits);
      },
      py::arg("alpha"), py::arg("t"), py::arg("k"), py::arg("bits") = 256,
      "mu_k by direct quadrature, independent of the recurrence.");

  m.def(
      "smallest_eigenvalue",
      [](double alpha, double t, long N, long bits) {
        WeightParams p(alpha, t);
        const long b = bits_for(alpha, t, N, bits);
        EigenCertificate cert = smallest_eigenvalue(p, N, PrecisionContext(b, b - 16));
        py::dict out;
        out["lambda"] = cert.lambda_min.to_string(kDigits);
        out["lo"] = cert.enclosure.lo.to_string(kDigits);
        out["hi"] = cert.enclosure.hi.to_string(kDigits);
        out["bits_used"] = cert.bits_used;
        out["escalations"] = cert.escalations;
        return out;
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("bits") = 0,
      "Certified smallest eigenvalue of H_N with enclosure (bits=0 uses the policy).");

  m.def(
      "rayleigh_bound",
      [](double alpha, double t, long N, long bits) {
        WeightParams p(alpha, t);
        const long b = bits_for(alpha, t, N, bits);
        MomentTable tab = compute_moment_table(p, std::max(2L, 2 * N),
                                               PrecisionContext(b, b - 16));
        HankelSystem sys = assemble(tab, N);
        KernelDiagonal kd = kernel_diagonal(sys);
        return rayleigh_lower_bound(kd).to_string(kDigits);
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("bits") = 0,
      "Circle-kernel lower bound 2 pi / sum_k K_kk <= lambda_N.");

  m.def(
      "kernel_diagonal",
      [](double alpha, double t, long N, long bits) {
        WeightParams p(alpha, t);
        const long b = bits_for(alpha, t, N, bits);
        MomentTable tab = compute_moment_table(p, std::max(2L, 2 * N),
                                               PrecisionContext(b, b - 16));
        HankelSystem sys = assemble(tab, N);
        KernelDiagonal kd = kernel_diagonal(sys);
        std::vector<std::string> out;
        for (const auto& v : kd.kvals) out.push_back(v.to_string(kDigits));
        return out;
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("bits") = 0,
      "K_00..K_NN of the circle kernel (Parseval route).");

  m.def(
      "precision_policy",
      [](long N, double alpha, double t) { return precision_policy(N, WeightParams(alpha, t)); },
      py::arg("N"), py::arg("alpha") = 0.0, py::arg("t") = 0.0);

  m.def(
      "solve_endpoints",
      [](double alpha, double t, long N, long bits) {
        EndpointPair e = endpoints_for(WeightParams(alpha, t), N, bits);
        return py::make_tuple(e.a.to_string(kDigits), e.b.to_string(kDigits));
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("bits") = 256,
      "Exact equilibrium-support endpoints (a, b).");

  m.def(
      "endpoint_expansion",
      [](double alpha, double t, long N, bool quartic, long bits) {
        EndpointExpansion e = endpoint_expansion(WeightParams(alpha, t), N, quartic, bits);
        return py::make_tuple(e.a_N.to_string(kDigits), e.b_N.to_string(kDigits));
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("include_quartic") = false,
      py::arg("bits") = 256, "Printed truncated series (a_N, b_N).");

  m.def(
      "lambda_prediction",
      [](double alpha, double t, long N, const std::string& variant, long bits) {
        return lambda_prediction(WeightParams(alpha, t), N, variant_from_name(variant), bits)
            .value.to_string(kDigits);
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("variant") = "proof",
      py::arg("bits") = 256, "Closed-form lambda_N prediction.");

  m.def(
      "pn_asymptotic",
      [](double z, double alpha, double t, long N, const std::string& form, long bits) {
        WeightParams p(alpha, t);
        EndpointPair e = endpoints_for(p, N, bits);
        Real zz(z, bits);
        Real v = form == "full" ? pn_full(zz, p, N, e, bits)
                 : form == "eta" ? pn_eta_form(zz, p, N, e, bits)
                                 : pn_simplified(zz, p, N, e, bits);
        return v.to_string(kDigits);
      },
      py::arg("z"), py::arg("alpha"), py::arg("t"), py::arg("N"),
      py::arg("form") = "simplified", py::arg("bits") = 256,
      "Asymptotic orthonormal-polynomial value at real z (form: full|eta|simplified).");

  m.def(
      "pn_exact",
      [](double z, double alpha, double t, long N, long bits) {
        WeightParams p(alpha, t);
        const long b = bits_for(alpha, t, N, bits);
        MomentTable tab = compute_moment_table(p, std::max(2L, 2 * N),
                                               PrecisionContext(b, b - 16));
        HankelSystem sys = assemble(tab, N);
        const auto& c = orthonormal_coeffs(sys);
        Real zz(z, sys.bits + 64), acc(sys.bits + 64), zp(1.0, sys.bits + 64);
        for (long j = 0; j <= N; ++j) {
          acc.add_product(c[N][j], zp);
          zp *= zz;
        }
        return acc.to_string(kDigits);
      },
      py::arg("z"), py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("bits") = 0,
      "P_N(z) from the exact orthonormal coefficient triangle.");

  m.def(
      "kernel_diag_asymptotic",
      [](double alpha, double t, long N, long mu, long bits) {
        return kernel_diag_asymptotic(WeightParams(alpha, t), N, mu, bits).to_string(kDigits);
      },
      py::arg("alpha"), py::arg("t"), py::arg("N"), py::arg("mu"), py::arg("bits") = 256);

  m.def(
      "verify_identities",
      [](double a, double b, double t_shift, long bits) {
        IdentityReport rep = verify_identity_suite(EndpointPair{Real(a, bits), Real(b, bits)},
                                                   Real(t_shift, bits),
                                                   PrecisionContext(bits, bits - 16));
        py::dict out;
        for (const auto& r : rep.residuals) {
          out[py::str(r.name)] = r.relative_residual.to_string(20);
        }
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("t_shift"), py::arg("bits") = 256,
      "Relative residuals of the closed-form integral identities A1..A5, B1.");
}

#include "splh/cli.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace splh {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (!(alpha > -1.0)) throw ConfigError("config: alpha must be > -1");
  if (!(t >= 0.0)) throw ConfigError("config: t must be >= 0");
  if (n_list.empty()) throw ConfigError("config: need at least one N (--n)");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 0) throw ConfigError("config: N must be >= 0");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw ConfigError("config: n list must be strictly increasing");
    }
  }
  if (bits_override && *bits_override < 64) throw ConfigError("config: bits must be >= 64");
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, end);
}

std::string moment_cache_filename(const WeightParams& p, long K, long bits) {
  return "mom_a" + format_double(p.alpha) + "_t" + format_double(p.t) + "_b" +
         std::to_string(bits) + "_K" + std::to_string(K) + ".json";
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out << content;
    if (!out.good()) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " -> " + path + ": " + ec.message());
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.out_path.empty() || cfg.out_path == "-") {
    std::cout << content;
    return;
  }
  write_file_atomic(cfg.out_path, content);
}

std::string or_nan(const std::optional<Real>& v, std::size_t digits) {
  return v ? v->to_string(digits) : "nan";
}

}  // namespace

MomentTable cached_moment_table(const WeightParams& p, long K, long bits,
                                const std::string& cache_dir) {
  std::string path;
  if (!cache_dir.empty()) {
    path = (fs::path(cache_dir) / moment_cache_filename(p, K, bits)).string();
    std::error_code ec;
    if (fs::exists(path, ec)) {
      MomentTable t = moment_table_from_json(read_file(path));
      if (t.params.alpha == p.alpha && t.params.t == p.t && t.bits == bits && t.K() == K) {
        return t;
      }
    }
  }
  MomentTable table = compute_moment_table(p, K, PrecisionContext(bits, bits - 16));
  if (!cache_dir.empty()) {
    std::error_code ec;
    fs::create_directories(cache_dir, ec);
    if (ec) throw IoError("cannot create cache dir " + cache_dir + ": " + ec.message());
    write_file_atomic(path, moment_table_to_json(table));
  }
  return table;
}

std::vector<SweepRecord> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const WeightParams p = cfg.weight();
  const long count = static_cast<long>(cfg.n_list.size());
  std::vector<SweepRecord> records(count);

  int threads = cfg.threads;
  if (threads > 1 && !mpfr_buildopt_tls_p()) {
    std::cerr << "splh: MPFR built without TLS, forcing --threads 1\n";
    threads = 1;
  }

  std::atomic<long> next{0};
  auto worker = [&]() {
    while (true) {
      const long idx = next.fetch_add(1);
      if (idx >= count) return;
      const long N = cfg.n_list[idx];
      SweepRecord rec;
      rec.N = N;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const long bits = cfg.bits_override ? *cfg.bits_override : precision_policy(N, p);
        MomentTable table = cached_moment_table(p, std::max(2L, 2 * N), bits, cfg.cache_dir);
        HankelSystem sys = assemble(table, N);
        KernelDiagonal kd = kernel_diagonal(sys);
        Real bound = rayleigh_lower_bound(kd);

        EigenCertificate cert = smallest_eigenvalue(sys, PrecisionContext(bits, bits - 16));
        rec.bits = cert.bits_used;
        rec.lambda_exact = cert.lambda_min.to_string(kSweepDigits);
        rec.lambda_lo = cert.enclosure.lo.to_string(kSweepDigits);
        rec.lambda_hi = cert.enclosure.hi.to_string(kSweepDigits);
        rec.rayleigh_bound = bound.to_string(kSweepDigits);

        const long pbits = 256;
        std::optional<Real> proof, theorem;
        if (N >= 1) {
          if (p.t > 0.0) {
            proof = lambda_prediction(p, N, PredictionVariant::ProofForm, pbits).value;
            theorem = lambda_prediction(p, N, PredictionVariant::TheoremForm, pbits).value;
          } else {
            // Both general forms collapse to the same t -> 0 limit.
            Real v = lambda_prediction(p, N, PredictionVariant::T0Alpha, pbits).value;
            proof = v;
            theorem = v;
          }
        }
        rec.pred_proof = or_nan(proof, kSweepDigits);
        rec.pred_theorem = or_nan(theorem, kSweepDigits);
        if (proof) {
          Real lam(pbits);
          mpfr_set(lam.raw(), cert.lambda_min.raw(), MPFR_RNDN);
          rec.ratio_proof = (*proof / lam).to_string(kSweepDigits);
          rec.ratio_theorem = (*theorem / lam).to_string(kSweepDigits);
        } else {
          rec.ratio_proof = rec.ratio_theorem = "nan";
        }
      } catch (const Error& e) {
        rec.error = e.what();
        rec.lambda_exact = rec.lambda_lo = rec.lambda_hi = "nan";
        rec.pred_proof = rec.pred_theorem = "nan";
        rec.ratio_proof = rec.ratio_theorem = rec.rayleigh_bound = "nan";
      }
      rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      records[idx] = std::move(rec);
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out << "N,lambda_exact,lambda_lo,lambda_hi,pred_proof,pred_theorem,"
         "ratio_proof,ratio_theorem,rayleigh_bound,bits,wall_ms\n";
  for (const auto& r : records) {
    out << r.N << ',' << r.lambda_exact << ',' << r.lambda_lo << ',' << r.lambda_hi << ','
        << r.pred_proof << ',' << r.pred_theorem << ',' << r.ratio_proof << ','
        << r.ratio_theorem << ',' << r.rayleigh_bound << ',' << r.bits << ',' << r.wall_ms
        << '\n';
  }
  return out.str();
}

std::string sweep_to_json(const std::vector<SweepRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["N"] = r.N;
    j["lambda_exact"] = r.lambda_exact;
    j["lambda_lo"] = r.lambda_lo;
    j["lambda_hi"] = r.lambda_hi;
    j["pred_proof"] = r.pred_proof;
    j["pred_theorem"] = r.pred_theorem;
    j["ratio_proof"] = r.ratio_proof;
    j["ratio_theorem"] = r.ratio_theorem;
    j["rayleigh_bound"] = r.rayleigh_bound;
    j["bits"] = r.bits;
    j["wall_ms"] = r.wall_ms;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

std::vector<EndpointRecord> run_endpoints(const RunConfig& cfg) {
  cfg.validate();
  const WeightParams p = cfg.weight();
  const long bits = cfg.bits_override.value_or(256);
  const PrecisionContext ctx(bits, bits - 16);
  std::vector<EndpointRecord> out;
  for (long N : cfg.n_list) {
    EndpointRecord rec;
    rec.N = N;
    if (N < 1) {
      rec.note = "skipped (N < 1)";
      out.push_back(rec);
      continue;
    }
    EndpointExpansion ex = endpoint_expansion(p, N, /*include_quartic=*/p.t > 0.0, bits);
    rec.a_expansion = ex.a_N.to_string(kSweepDigits);
    rec.b_expansion = ex.b_N.to_string(kSweepDigits);
    if (p.t == 0.0 && p.alpha == 0.0) {
      Real b(4.0 * static_cast<double>(N), bits);
      rec.a_exact = Real(0.0, bits).to_string(kSweepDigits);
      rec.b_exact = b.to_string(kSweepDigits);
      rec.note = "hard-edge";
      rec.rel_da = "nan";
      rec.rel_db = (abs(b - ex.b_N) / b).to_string(kSweepDigits);
      rec.ratio_a = "nan";
      out.push_back(rec);
      continue;
    }
    try {
      EndpointPair e = solve_endpoints_exact(p, N, ctx);
      rec.a_exact = e.a.to_string(kSweepDigits);
      rec.b_exact = e.b.to_string(kSweepDigits);
      rec.rel_da = (abs(e.a - ex.a_N) / e.a).to_string(kSweepDigits);
      rec.rel_db = (abs(e.b - ex.b_N) / e.b).to_string(kSweepDigits);
      rec.ratio_a = (e.a / ex.a_N).to_string(kSweepDigits);
    } catch (const Error& err) {
      rec.note = err.what();
      rec.a_exact = rec.b_exact = rec.rel_da = rec.rel_db = rec.ratio_a = "nan";
    }
    out.push_back(rec);
  }
  return out;
}

std::string endpoints_to_csv(const std::vector<EndpointRecord>& records) {
  std::ostringstream out;
  out << "N,a_exact,b_exact,a_expansion,b_expansion,rel_da,rel_db,ratio_a,note\n";
  for (const auto& r : records) {
    out << r.N << ',' << r.a_exact << ',' << r.b_exact << ',' << r.a_expansion << ','
        << r.b_expansion << ',' << r.rel_da << ',' << r.rel_db << ',' << r.ratio_a << ','
        << r.note << '\n';
  }
  return out.str();
}

std::string endpoints_to_json(const std::vector<EndpointRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["N"] = r.N;
    j["a_exact"] = r.a_exact;
    j["b_exact"] = r.b_exact;
    j["a_expansion"] = r.a_expansion;
    j["b_expansion"] = r.b_expansion;
    j["rel_da"] = r.rel_da;
    j["rel_db"] = r.rel_db;
    j["ratio_a"] = r.ratio_a;
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

int cmd_moments(const RunConfig& cfg) {
  cfg.validate();
  const WeightParams p = cfg.weight();
  const long maxN = cfg.n_list.back();
  const long K = std::max(2L, 2 * maxN);
  const long bits = cfg.bits_override ? *cfg.bits_override : precision_policy(maxN, p);
  MomentTable table = cached_moment_table(p, K, bits, cfg.cache_dir);
  emit(cfg, moment_table_to_json(table) + "\n");
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  auto records = run_sweep(cfg);
  emit(cfg, cfg.format == OutFormat::Csv ? sweep_to_csv(records) : sweep_to_json(records));
  for (const auto& r : records) {
    if (!r.error.empty()) {
      std::cerr << "splh sweep: N=" << r.N << " failed: " << r.error << "\n";
      return 3;
    }
  }
  return 0;
}

int cmd_endpoints(const RunConfig& cfg) {
  auto records = run_endpoints(cfg);
  emit(cfg,
       cfg.format == OutFormat::Csv ? endpoints_to_csv(records) : endpoints_to_json(records));
  return 0;
}

int cmd_predict(const RunConfig& cfg) {
  cfg.validate();
  const WeightParams p = cfg.weight();
  const long bits = cfg.bits_override.value_or(256);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "N,variant,value\n";
  for (long N : cfg.n_list) {
    LambdaPrediction pred = lambda_prediction(p, N, cfg.variant, bits);
    std::string v = pred.value.to_string(kSweepDigits);
    nlohmann::ordered_json j;
    j["N"] = N;
    j["variant"] = variant_name(pred.variant);
    j["value"] = v;
    arr.push_back(std::move(j));
    csv << N << ',' << variant_name(pred.variant) << ',' << v << '\n';
  }
  emit(cfg, cfg.format == OutFormat::Csv ? csv.str() : arr.dump(1) + "\n");
  return 0;
}

int cmd_kernel(const RunConfig& cfg) {
  cfg.validate();
  const WeightParams p = cfg.weight();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  nlohmann::ordered_json dump = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "N,mu,k_exact,k_asymptotic,ratio,quadrature_check\n";
  for (long N : cfg.n_list) {
    const long bits = cfg.bits_override ? *cfg.bits_override : precision_policy(N, p);
    MomentTable table = cached_moment_table(p, std::max(2L, 2 * N), bits, cfg.cache_dir);
    HankelSystem sys = assemble(table, N);
    KernelDiagonal kd = kernel_diagonal(sys);
    const long lo = N - static_cast<long>(std::floor(std::sqrt(static_cast<double>(N))));
    for (long mu = std::max(0L, lo); mu <= N; ++mu) {
      Real exact = kd.kvals[mu];
      Real asym = kernel_diag_asymptotic(p, N, mu, 256);
      Real exact256(256);
      mpfr_set(exact256.raw(), exact.raw(), MPFR_RNDN);
      std::string qc = "nan";
      if (mu == N) {
        Real viaquad = kernel_entry_circle(sys, N, N);
        qc = (abs(viaquad - exact) / exact).to_string(20);
      }
      nlohmann::ordered_json j;
      j["N"] = N;
      j["mu"] = mu;
      j["k_exact"] = exact.to_string(kSweepDigits);
      j["k_asymptotic"] = asym.to_string(kSweepDigits);
      j["ratio"] = (exact256 / asym).to_string(kSweepDigits);
      j["quadrature_check"] = qc;
      arr.push_back(j);
      csv << N << ',' << mu << ',' << j["k_exact"].get<std::string>() << ','
          << j["k_asymptotic"].get<std::string>() << ',' << j["ratio"].get<std::string>() << ','
          << qc << '\n';
    }
    if (!cfg.dump_path.empty()) {
      const std::size_t digits = decimal_digits_for_bits(sys.bits);
      nlohmann::ordered_json d;
      d["alpha"] = p.alpha;
      d["t"] = p.t;
      d["N"] = N;
      d["bits"] = sys.bits;
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : orthonormal_coeffs(sys)) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(c.to_string(digits));
        rows.push_back(std::move(r));
      }
      d["coeffs"] = std::move(rows);
      nlohmann::ordered_json kv = nlohmann::ordered_json::array();
      for (const auto& v : kd.kvals) kv.push_back(v.to_string(digits));
      d["kernel_diagonal"] = std::move(kv);
      dump.push_back(std::move(d));
    }
  }
  if (!cfg.dump_path.empty()) {
    write_file_atomic(cfg.dump_path, dump.dump(1) + "\n");
  }
  emit(cfg, cfg.format == OutFormat::Csv ? csv.str() : arr.dump(1) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const long bits = cfg.bits_override.value_or(256);
  const PrecisionContext ctx(bits, bits - 16);
  const Real tol = Real::pow2(-ctx.quad_tolerance_exponent, 64);
  std::mt19937_64 rng(0x5eed0001);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  bool all_ok = true;
  std::ostringstream out;

  out << "identity suite at " << bits << " bits (target 2^-" << ctx.quad_tolerance_exponent
      << ")\n";
  for (int i = 0; i < 12; ++i) {
    double a = 0.05 + 99.0 * unif(rng) * unif(rng);
    double b = a + 0.1 + (100.0 - a) * unif(rng);
    double ts;
    if (i % 3 == 0) {
      ts = -0.9 * a + 0.8 * a * unif(rng);  // pole keeps left of a, log stays defined
      if (ts == 0.0) ts = 0.25 * a;
    } else {
      ts = b + 0.1 + 50.0 * unif(rng);
    }
    EndpointPair ep{Real(a, bits), Real(b, bits)};
    IdentityReport rep = verify_identity_suite(ep, Real(ts, bits), ctx);
    Real worst = rep.max_relative_residual();
    bool ok = worst <= tol;
    all_ok = all_ok && ok;
    out << "  [" << (ok ? "ok" : "FAIL") << "] a=" << format_double(a)
        << " b=" << format_double(b) << " t=" << format_double(ts) << " worst residual 2^"
        << (worst.is_zero() ? -100000.0 : std::log2(worst.to_double())) << "\n";
    if (!ok) {
      for (const auto& r : rep.residuals) {
        if (r.relative_residual > tol) out << "       offending identity: " << r.name << "\n";
      }
    }
  }

  out << "Parseval + orthonormality at small N\n";
  for (double alpha : {0.0, 0.5}) {
    for (double tt : {0.0, 1.0}) {
      WeightParams p(alpha, tt);
      const long wb = std::max(bits, precision_policy(10, p));
      MomentTable table = compute_moment_table(p, 20, PrecisionContext(wb, wb - 16));
      HankelSystem sys = assemble(table, 10);
      const auto& c = orthonormal_coeffs(sys);
      Real worst(64);
      for (long j = 0; j <= 10; ++j) {
        for (long k = 0; k <= j; ++k) {
          Real g(sys.bits + 64);
          for (long r = 0; r <= j; ++r)
            for (long s = 0; s <= k; ++s) g.add_product(c[j][r] * c[k][s], sys.moment(r, s));
          Real target(j == k ? 1.0 : 0.0, 64);
          worst = max(worst, abs(g - target));
        }
      }
      KernelDiagonal kd = kernel_diagonal(sys);
      Real kq = kernel_entry_circle(sys, 10, 10);
      Real pdiff = abs(kq - kd.kvals[10]) / kd.kvals[10];
      Real cap = Real::pow2(-wb / 4, 64);
      bool ok = worst <= cap && pdiff <= cap;
      all_ok = all_ok && ok;
      out << "  [" << (ok ? "ok" : "FAIL") << "] alpha=" << format_double(alpha)
          << " t=" << format_double(tt) << " orthonormality 2^"
          << (worst.is_zero() ? -100000.0 : std::log2(worst.to_double())) << " parseval 2^"
          << (pdiff.is_zero() ? -100000.0 : std::log2(pdiff.to_double())) << "\n";
    }
  }

  std::cout << out.str();
  std::cout << (all_ok ? "verify: all checks passed\n" : "verify: FAILURES above\n");
  return all_ok ? 0 : 1;
}

}  // namespace splh

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splh/asymptotics.hpp"
#include "splh/eigen.hpp"
#include "splh/moments.hpp"

namespace splh {

struct IoError : Error {
  using Error::Error;
};

enum class OutFormat { Json, Csv };

struct RunConfig {
  double alpha = 0.0;
  double t = 0.0;
  std::vector<long> n_list;
  std::optional<long> bits_override;
  PredictionVariant variant = PredictionVariant::ProofForm;
  OutFormat format = OutFormat::Json;
  std::string cache_dir = "moment-cache";  // empty disables the disk cache
  int threads = 1;
  std::string out_path;  // empty writes to stdout
  std::string dump_path;  // kernel subcommand: also dump coefficient triangles

  void validate() const;  // throws ConfigError
  WeightParams weight() const { return WeightParams(alpha, t); }
};

struct SweepRecord {
  long N = 0;
  std::string lambda_exact, lambda_lo, lambda_hi;
  std::string pred_proof, pred_theorem;
  std::string ratio_proof, ratio_theorem;  // prediction / exact
  std::string rayleigh_bound;
  long bits = 0;
  long wall_ms = 0;
  std::string error;  // nonempty marks a failed row (kept in place, sweep continues)
};

/// Pinned serialization width for sweep quantities (the certificate itself
/// is only good to 2^-48, so a fixed digit count keeps files byte-stable).
constexpr std::size_t kSweepDigits = 40;

/// Moment table with disk cache. Filename mom_a<alpha>_t<t>_b<bits>_K<K>.json.
MomentTable cached_moment_table(const WeightParams& p, long K, long bits,
                                const std::string& cache_dir);
std::string moment_cache_filename(const WeightParams& p, long K, long bits);

/// One full certification per N, parallel across N, records in N order.
std::vector<SweepRecord> run_sweep(const RunConfig& cfg);

std::string sweep_to_csv(const std::vector<SweepRecord>& records);
std::string sweep_to_json(const std::vector<SweepRecord>& records);

struct EndpointRecord {
  long N = 0;
  std::string a_exact, b_exact, a_expansion, b_expansion;
  std::string rel_da, rel_db, ratio_a;
  std::string note;  // "hard-edge" when t=0, alpha=0
};
std::vector<EndpointRecord> run_endpoints(const RunConfig& cfg);
std::string endpoints_to_csv(const std::vector<EndpointRecord>& records);
std::string endpoints_to_json(const std::vector<EndpointRecord>& records);

int cmd_moments(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_endpoints(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_predict(const RunConfig& cfg);
int cmd_kernel(const RunConfig& cfg);

/// Shortest round-trip decimal form of a double ("0.5", "10", "1e-05").
std::string format_double(double v);

}  // namespace splh

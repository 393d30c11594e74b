#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "splh/cli.hpp"

namespace {

struct CommonOpts {
  splh::RunConfig cfg;
  std::string variant = "proof";
  std::string format = "json";
};

void add_common(CLI::App* app, CommonOpts& c) {
  app->add_option("--alpha", c.cfg.alpha, "weight exponent alpha (> -1)");
  app->add_option("--t", c.cfg.t, "singular perturbation strength t (>= 0)");
  app->add_option("--n", c.cfg.n_list, "matrix order N or comma list, e.g. 20,40,60")
      ->delimiter(',');
  app->add_option_function<long>(
      "--bits", [&c](const long& b) { c.cfg.bits_override = b; },
      "override the working-precision policy (bits)");
  app->add_option("--variant", c.variant, "prediction variant: proof|theorem|t0-alpha|t0-szego");
  app->add_option("--format", c.format, "output format: json|csv");
  app->add_option("--cache", c.cfg.cache_dir, "moment cache directory ('' disables)");
  app->add_option("--threads", c.cfg.threads, "parallel workers across N");
  app->add_option("--out", c.cfg.out_path, "output path (default stdout)");
  app->add_option("--dump", c.cfg.dump_path,
                  "kernel: also write coefficient triangles + kernel diagonals (JSON)");
}

splh::RunConfig finalize(CommonOpts& c) {
  c.cfg.variant = splh::variant_from_name(c.variant);
  if (c.format == "json") {
    c.cfg.format = splh::OutFormat::Json;
  } else if (c.format == "csv") {
    c.cfg.format = splh::OutFormat::Csv;
  } else {
    throw splh::ConfigError("unknown format '" + c.format + "'");
  }
  return c.cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smallest-eigenvalue studies of Hankel matrices for the weight "
               "x^alpha exp(-x - t/x)"};
  app.require_subcommand(1);

  CommonOpts moments, sweep, endpoints, verify, predict, kernel;
  add_common(app.add_subcommand("moments", "compute and cache a moment table"), moments);
  add_common(app.add_subcommand("sweep", "certified lambda_N sweep with predictions"), sweep);
  add_common(app.add_subcommand("endpoints", "exact vs series support endpoints"), endpoints);
  add_common(app.add_subcommand("verify", "integral-identity and kernel self-checks"), verify);
  add_common(app.add_subcommand("predict", "closed-form lambda_N predictions"), predict);
  add_common(app.add_subcommand("kernel", "exact vs asymptotic circle-kernel diagonal"), kernel);

  try {
    app.parse(argc, argv);
    if (app.get_subcommand("moments")->parsed()) return splh::cmd_moments(finalize(moments));
    if (app.get_subcommand("sweep")->parsed()) return splh::cmd_sweep(finalize(sweep));
    if (app.get_subcommand("endpoints")->parsed()) return splh::cmd_endpoints(finalize(endpoints));
    if (app.get_subcommand("verify")->parsed()) return splh::cmd_verify(finalize(verify));
    if (app.get_subcommand("predict")->parsed()) return splh::cmd_predict(finalize(predict));
    if (app.get_subcommand("kernel")->parsed()) return splh::cmd_kernel(finalize(kernel));
    return 2;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const splh::ConfigError& e) {
    std::cerr << "splh: " << e.what() << "\n";
    return 2;
  } catch (const splh::IoError& e) {
    std::cerr << "splh: " << e.what() << "\n";
    return 4;
  } catch (const splh::ResourceError& e) {
    std::cerr << "splh: " << e.what() << "\n";
    return 3;
  } catch (const splh::Error& e) {
    std::cerr << "splh: " << e.what() << "\n";
    return 3;
  }
}

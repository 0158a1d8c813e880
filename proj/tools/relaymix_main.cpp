#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "relaymix/errors.hpp"
#include "relaymix/experiments.hpp"
#include "relaymix/netmodel.hpp"

using namespace relaymix;

int main(int argc, char** argv) {
  CLI::App app{
      "Outage analysis for a relay-assisted decentralized wireless "
      "network"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", tool_version);
  app.set_config("--config",
                 "Options file; a manifest written by --out replays its "
                 "run. Command line flags win over file values.");

  RunConfig cfg;
  double sigma_in_opt = 0.0;
  double rho_re = 0.0;
  double rho_im = 0.0;

  auto* lam_in = app.add_option("--lambda_in", cfg.params.lambda_in,
                                "Relay candidate density");
  auto* sig_in =
      app.add_option("--sigma_in", sigma_in_opt,
                     "Relay scatter scale, alternative to --lambda_in");
  sig_in->excludes(lam_in);
  lam_in->excludes(sig_in);
  app.add_option("--lambda_s", cfg.params.lambda_s,
                 "Source cluster density");
  app.add_option("--alpha", cfg.params.alpha, "Path loss exponent");
  app.add_option("--rate", cfg.params.rate,
                 "Target spectral efficiency (bits/use)");
  app.add_option("--dest_distance", cfg.params.dest_distance,
                 "Source to destination separation");
  app.add_option("--phi0", cfg.params.phi0, "Relay cone aperture");
  app.add_option("--p_r", cfg.params.p_r, "Relay activation probability");
  app.add_option("--tau", cfg.params.tau,
                 "Far-field cluster anchor: 0 source, 1 relay");
  app.add_option("--rho_re", rho_re, "Codebook correlation, real part");
  app.add_option("--rho_im", rho_im, "Codebook correlation, imaginary part");
  app.add_option("--realizations", cfg.realizations,
                 "Monte Carlo realizations");
  app.add_option("--seed", cfg.seed, "Random stream seed");
  app.add_option("--workers", cfg.workers, "Worker threads");
  app.add_flag("--far_field,!--no-far_field", cfg.far_field,
               "Collapse interfering clusters to their anchor point");
  app.add_option("--window_radius", cfg.window_radius,
                 "Interferer window radius, 0 for automatic");
  app.add_option("--scheme", cfg.scheme,
                 "Typical pair scheme: mixed, direct or relay");
  app.add_option("--rule", cfg.rule,
                 "Activation rule: bernoulli, sr-threshold or rd-threshold");
  app.add_option("--field_rule", cfg.field_rule,
                 "Interferer threshold handling: field or marginal");
  app.add_option("--threshold", cfg.threshold,
                 "Channel power threshold for threshold rules");
  app.add_option("--op_target", cfg.op_target,
                 "Outage target for max-rate");
  app.add_option("--r_samples", cfg.r_samples,
                 "Relay positions averaged by exact-op");
  app.add_option("--budget", cfg.budget,
                 "Evaluation budget for threshold searches");
  app.add_option("--sweep", cfg.sweep,
                 "Repeat the command over field=v1,v2,...");
  app.add_option("--out", cfg.out,
                 "CSV destination; the manifest lands beside it");
  app.add_option("figure,--figure", cfg.figure, "Figure id, fig3..fig7");

  const char* names[][2] = {
      {"dt-op", "Direct transmission outage probability"},
      {"bound", "Closed upper bound on the mixed-scheme outage"},
      {"exact-op", "Exact mixed outage via the joint interference transform"},
      {"mc", "Monte Carlo outage estimate"},
      {"sigma-c", "Scatter limit keeping the bound concave in p_r"},
      {"sigma-t", "Scatter width where always-on relaying stops paying off"},
      {"decide", "Endpoint activation decision with supporting scalars"},
      {"gain", "Relay to direct outage ratio"},
      {"opt-phi", "Cone aperture minimizing the outage ratio"},
      {"max-rate", "Largest rate meeting the outage target"},
      {"figure", "Reproduce a figure dataset (fig3..fig7)"},
  };
  for (const auto& n : names) app.add_subcommand(n[0], n[1]);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sig_in)
      cfg.params.lambda_in = lambda_in_of_sigma(sigma_in_opt);
    cfg.params.rho = {rho_re, rho_im};
    const std::string command = app.get_subcommands().front()->get_name();
    const ResultTable table = run_command(command, cfg);
    write_outputs(command, cfg, table, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "relaymix/netmodel.hpp"

#include <cmath>
#include <sstream>

#include "relaymix/errors.hpp"

namespace relaymix {

double threshold_from_rate(double rate) { return std::exp2(rate) - 1.0; }

double interference_constant(double alpha) {
  const double u = 2.0 / alpha;
  return (two_pi / alpha) * std::tgamma(u) * std::tgamma(1.0 - u);
}

double delta_of(double alpha, double rate) {
  return interference_constant(alpha) *
         std::pow(threshold_from_rate(rate), 2.0 / alpha);
}

double delta_mix_of(const NetworkParams& p, double p_r) {
  return delta_of(p.alpha, p.rate) * (1.0 + 2.0 * p_r / p.alpha);
}

double nu_of(const NetworkParams& p, double p_r) {
  return p.lambda_s * delta_mix_of(p, p_r) * p.dest_distance * p.dest_distance;
}

double sigma_in_of(double lambda_in) {
  return 1.0 / std::sqrt(two_pi * lambda_in);
}

double lambda_in_of_sigma(double sigma_in) {
  return 1.0 / (two_pi * sigma_in * sigma_in);
}

ValidationReport validate_params(const NetworkParams& p) {
  ValidationReport rep;
  auto fail = [&rep](ParamFault fault, const char* field, std::string msg) {
    rep.violations.push_back({fault, field, std::move(msg)});
  };
  auto positive = [&](double v, const char* field) {
    if (!(v > 0.0))
      fail(ParamFault::NonPositiveParameter, field,
           std::string(field) + " must be positive");
  };
  if (!(p.alpha > 2.0))
    fail(ParamFault::AlphaOutOfRange, "alpha",
         "alpha must exceed 2 for finite interference");
  positive(p.lambda_s, "lambda_s");
  positive(p.lambda_in, "lambda_in");
  positive(p.rate, "rate");
  positive(p.dest_distance, "dest_distance");
  if (!(p.phi0 > 0.0) || p.phi0 > two_pi * (1.0 + 1e-12))
    fail(ParamFault::ApertureOutOfRange, "phi0",
         "phi0 must lie in (0, 2pi]");
  if (!(p.p_r >= 0.0 && p.p_r <= 1.0))
    fail(ParamFault::ProbabilityOutOfRange, "p_r",
         "p_r must lie in [0, 1]");
  if (!(p.tau >= 0.0 && p.tau <= 1.0))
    fail(ParamFault::ProbabilityOutOfRange, "tau",
         "tau must lie in [0, 1]");
  if (!(std::abs(p.rho) <= 1.0 + 1e-15))
    fail(ParamFault::CorrelationMagnitudeExceedsOne, "rho",
         "|rho| must not exceed 1");
  if (rep.ok() && p.lambda_s > p.lambda_in / 10.0)
    rep.warnings.push_back(
        "lambda_s exceeds lambda_in/10: relay candidates are scarce relative "
        "to sources and the cluster model is strained");
  return rep;
}

void require_valid(const NetworkParams& p) {
  const ValidationReport rep = validate_params(p);
  if (rep.ok()) return;
  std::ostringstream msg;
  msg << "invalid parameters:";
  for (const auto& v : rep.violations) msg << " [" << v.message << "]";
  throw ValidationError(msg.str());
}

DerivedScalars derive_scalars(const NetworkParams& p) {
  require_valid(p);
  DerivedScalars d;
  d.threshold = threshold_from_rate(p.rate);
  d.interference_c = interference_constant(p.alpha);
  d.outage_delta = d.interference_c * std::pow(d.threshold, 2.0 / p.alpha);
  d.delta_mix = d.outage_delta * (1.0 + 2.0 * p.p_r / p.alpha);
  d.nu = p.lambda_s * d.delta_mix * p.dest_distance * p.dest_distance;
  d.sigma_in = sigma_in_of(p.lambda_in);
  d.sigma_k = 1.0 / std::sqrt(p.lambda_in * p.phi0);
  d.s_scale = d.sigma_k / p.dest_distance;
  return d;
}

}  // namespace relaymix

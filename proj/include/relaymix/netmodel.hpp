#pragma once

#include <complex>
#include <string>
#include <vector>

namespace relaymix {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Scene: source clusters form a planar Poisson process of density lambda_s.
// Each source may hand its message to a relay drawn from a cone of aperture
// phi0 pointed at its destination; relay candidates have density lambda_in.
// The typical pair sits at the origin with destination at (dest_distance, 0).
struct NetworkParams {
  double lambda_s = 1e-4;        // source cluster density, > 0
  double lambda_in = 1.0 / two_pi;  // relay candidate density, > 0
  double alpha = 4.0;            // path loss exponent, > 2
  double rate = 0.5;             // target spectral efficiency (bits/use), > 0
  double dest_distance = 10.0;   // source-destination separation, > 0
  double phi0 = two_pi;          // relay cone aperture, in (0, 2pi]
  double p_r = 0.0;              // relay activation probability, in [0, 1]
  std::complex<double> rho{0.0, 0.0};  // codebook correlation, |rho| <= 1
  double tau = 0.0;  // far-field cluster anchor in [0, 1]: 0 source, 1 relay
};

struct DerivedScalars {
  double threshold;        // T = 2^rate - 1, the SIR decoding threshold
  double interference_c;   // C = (2 pi / alpha) Gamma(2/alpha) Gamma(1-2/alpha)
  double outage_delta;     // delta = C T^{2/alpha}
  double delta_mix;        // Delta = delta (1 + 2 p_r / alpha)
  double nu;               // nu = lambda_s Delta dest_distance^2
  double sigma_in;         // relay scatter scale, 1/sqrt(2 pi lambda_in)
  double sigma_k;          // relay offset radial scale, 1/sqrt(lambda_in phi0)
  double s_scale;          // sigma_k / dest_distance
};

enum class ParamFault {
  AlphaOutOfRange,
  NonPositiveParameter,
  ApertureOutOfRange,
  ProbabilityOutOfRange,
  CorrelationMagnitudeExceedsOne,
};

struct ParamViolation {
  ParamFault fault;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ParamViolation> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_params(const NetworkParams& p);

// Throws ValidationError listing every violation; warnings are not fatal.
void require_valid(const NetworkParams& p);

double threshold_from_rate(double rate);
double interference_constant(double alpha);
double delta_of(double alpha, double rate);
double delta_mix_of(const NetworkParams& p, double p_r);
double nu_of(const NetworkParams& p, double p_r);
double sigma_in_of(double lambda_in);
double lambda_in_of_sigma(double sigma_in);

DerivedScalars derive_scalars(const NetworkParams& p);

}  // namespace relaymix

#pragma once

#include <cstddef>

#include "relaymix/netmodel.hpp"

namespace relaymix {

// Outage probability of direct transmission, 1 - exp(-lambda_s delta D^2).
double op_dt(const NetworkParams& p);

struct BoundResult {
  double value = 0.0;
  bool clamped = false;  // raw expression fell outside [0, 1]
};

// Closed upper bound on the mixed-scheme outage probability when relays
// activate independently with probability p_r. Exact at p_r = 0.
BoundResult op_mix_upper_bound(const NetworkParams& p, double p_r);

// Q_{2,0}(s, 0): the factor in the isotropic expected relay-destination
// distance, sqrt(pi/8) e^{-s^2/4} [(s^2+2) I0(s^2/4) + s^2 I1(s^2/4)].
double nuttall_q20(double s);

// E||r - d|| for a relay drawn from the cone offset law (radius
// Rayleigh(sigma_k), angle uniform over the aperture) at source-destination
// separation dest_distance. Closed form at phi0 = 2pi, deterministic panel
// quadrature otherwise (absolute tolerance 1e-6 * max(dest_distance,
// sigma_k)).
double expected_relay_dest_distance(double sigma_in, double phi0,
                                    double dest_distance);
double expected_relay_dest_distance(const NetworkParams& p);

// Quadrature path regardless of aperture; used to cross-check the closed
// branch. Throws QuadratureNonConvergence if refinement moves the value by
// more than abs_tol.
double expected_relay_dest_distance_quadrature(double sigma_in, double phi0,
                                               double dest_distance,
                                               double abs_tol);

// Aperture-geometry factor entering the distance bound; can go negative for
// narrow cones. gamma(s -> inf) -> sqrt(pi/2).
double gamma_factor(double s, double phi0);

// E||r - d|| <= dest_distance (1 + s gamma(s, phi0)) with s = sigma_k / D.
double expected_distance_bound(double sigma_in, double phi0,
                               double dest_distance);

struct SigmaResult {
  double root = 0.0;          // solved from the full residual
  double closed_bound = 0.0;  // conservative closed-form stand-in
};

// Largest relay scatter sigma_in for which the outage bound is concave in
// p_r, so the best activation probability sits at an endpoint. Requires
// lambda_s delta D^2 < (3 - sqrt 5)/2.
SigmaResult sigma_c(const NetworkParams& p);

// Relay scatter below which always-on relays beat direct transmission.
SigmaResult sigma_t(const NetworkParams& p);

// Small-nu outage ratio relay/direct, clamped to (0, 1]; equals 1 when
// sigma_in exceeds the sigma_t root.
double op_gain_ratio(const NetworkParams& p);

struct ActivationAnalysis {
  int decided_p_r = 0;  // 0 or 1
  double sigma_in = 0.0;
  SigmaResult concavity;   // sigma_c
  SigmaResult threshold;   // sigma_t
  double gain_ratio = 1.0;
};

ActivationAnalysis activation_decision(const NetworkParams& p);

struct Phi0Result {
  double phi0_star = 0.0;
  double ratio_at_star = 1.0;
};

// Minimizes the outage gain ratio over the cone aperture at fixed relay
// candidate density (grid scan plus golden-section refinement).
Phi0Result optimize_phi0(const NetworkParams& p, std::size_t grid_cells = 64);

enum class RateScheme { Dt, Mix };

// Largest rate whose outage stays at the target: inverts op_dt (Dt) or the
// endpoint-optimized mixed bound (Mix) by bisection to abs_tol on the rate.
double max_rate_for_op(const NetworkParams& p, double op_target,
                       RateScheme scheme, double abs_tol = 1e-4);

}  // namespace relaymix

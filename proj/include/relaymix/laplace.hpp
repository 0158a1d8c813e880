#pragma once

#include <cstdint>

#include "relaymix/geometry.hpp"
#include "relaymix/netmodel.hpp"

namespace relaymix {

// Controls for the stochastic and deterministic integrals behind the exact
// interference Laplace transforms.
struct LtOptions {
  double t_target_rel_error = 1e-3;     // stop when SE/value falls below this
  std::int64_t t_max_samples = std::int64_t{1} << 23;
  std::int64_t t_min_samples = std::int64_t{1} << 12;
  std::uint64_t seed = 0;
  bool throw_on_budget = true;  // else return the best estimate reached
  double f_abs_tol = 1e-3;      // overlap integral absolute tolerance
};

// Laplace transform of the aggregate interference at a single receiver under
// the far-field cluster approximation: exp(-lambda_s C w^{2/alpha}
// (1 + 2 p_r / alpha)).
double lt_interference_closed(double omega, const NetworkParams& p,
                              double p_r);

struct PairExponentResult {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Plane integral of E_k[1 - z z z z] over cluster positions for clusters
// whose relay transmits: the per-unit-density exponent they contribute to
// the joint transform at receivers d = (D, 0) (weight omega_dest) and
// relay_pos (weight omega_relay). Estimated by stratified importance
// sampling (uniform core disk + Pareto tail matched to the rho^-alpha
// integrand decay); deterministic for a fixed seed.
PairExponentResult relay_cluster_exponent(double omega_dest,
                                          double omega_relay,
                                          const NetworkParams& p,
                                          Vec2 relay_pos,
                                          const LtOptions& opts);

// Overlap correction for source-only clusters seen jointly by two
// receivers: int w1 w2 / ((w1 + ||x-d||^a)(w2 + ||x-r||^a)) dx.
// Deterministic polar panel quadrature with an analytic power-law tail.
double receiver_overlap_integral(double omega_dest, double omega_relay,
                                 Vec2 dest, Vec2 relay_pos, double alpha,
                                 double abs_tol,
                                 bool check_refinement = true);

struct JointLtResult {
  double value = 0.0;      // E[exp(-w_d I_dest - w_r I_relay)]
  double exponent = 0.0;   // -log(value)
  double pair_exponent = 0.0;       // relay-active cluster integral
  double pair_std_error = 0.0;
  std::int64_t pair_samples = 0;
  double overlap = 0.0;             // source-only overlap integral
};

// Joint Laplace transform of the interference at the destination (D, 0) and
// at relay_pos, for a field whose clusters activate their relay with
// probability p_r. Requires rho = 0 (independent per-path fading).
JointLtResult lt_interference_joint(double omega_dest, double omega_relay,
                                    const NetworkParams& p, double p_r,
                                    Vec2 relay_pos, const LtOptions& opts);

// Outage probability of the relayed mode conditioned on the relay sitting at
// relay_pos: the typical source decodes at the relay and the destination
// combines both hops; interferers follow the mixed field with activation
// p_r taken from the same call. Combines two joint-transform evaluations
// that share one sample stream; values are clamped to [0, 1] against
// Monte Carlo noise. The removable singularity at ||relay - dest|| = D is
// evaluated by a derivative limit.
double relay_mode_fail_prob(const NetworkParams& p, double p_r,
                            Vec2 relay_pos, const LtOptions& opts);

struct ExactOutageOptions {
  std::int64_t r_samples = 10000;  // relay positions averaged over
  std::uint64_t seed = 0;
  // Per-position transform controls; loose because each position only
  // contributes 1/r_samples of the average.
  LtOptions inner{0.02, std::int64_t{1} << 13, std::int64_t{1} << 10, 0,
                  false, 1e-2};
};

struct ExactOutageResult {
  double value = 0.0;
  double std_error = 0.0;       // from the relay-position average
  double direct_fail = 0.0;     // outage of the non-relayed mode
  double relay_fail = 0.0;      // mean outage of the relayed mode
};

// Exact mixed-scheme outage probability: (1 - p_r) times the non-relayed
// mode outage plus p_r times the relayed mode outage averaged over the
// relay offset law. Reduces bit-exactly to op_dt at p_r = 0.
ExactOutageResult op_mix_exact(const NetworkParams& p, double p_r,
                               const ExactOutageOptions& opts);

}  // namespace relaymix

#pragma once

#include <cstdint>
#include <vector>

#include "relaymix/netmodel.hpp"

namespace relaymix {

// How the typical pair transmits. Interfering clusters always follow the
// activation rule; the scheme only pins the typical cluster's mode.
enum class McScheme {
  Mixed,        // typical relays when the activation rule fires
  DirectOnly,   // typical never relays
  RelayAlways,  // typical always relays
};

// How a cluster decides to put its relay on air.
enum class ActivationRule {
  Bernoulli,             // independent coin with probability p_r
  SourceRelayThreshold,  // source->relay channel power above threshold_value
  RelayDestThreshold,    // relay->own destination power above threshold_value
};

// How interfering clusters apply a threshold rule.
enum class ThresholdFieldRule {
  FieldConsistent,      // each cluster tests its own channel draw
  MarginalProbability,  // clusters flip a coin with the marginal firing rate
};

struct McOptions {
  std::int64_t realizations = 20000;
  std::uint64_t seed = 0;
  int workers = 1;
  bool far_field = false;      // collapse clusters to their anchor point
  double window_radius = 0.0;  // 0: automatic truncation radius
  ActivationRule activation = ActivationRule::Bernoulli;
  ThresholdFieldRule field_rule = ThresholdFieldRule::FieldConsistent;
  double threshold_value = 0.0;  // non-negative; 0 always fires
};

struct McCounts {
  std::int64_t realizations = 0;
  std::int64_t outages = 0;
  std::int64_t relay_mode = 0;         // realizations with a relaying typical
  std::int64_t relay_outage = 0;       // outages among those
  std::int64_t relay_decode_fail = 0;  // among relay-mode realizations
  std::int64_t combined_fail = 0;      // among relay-mode realizations
  std::int64_t direct_fail = 0;        // outages among direct realizations
  std::int64_t interferers = 0;        // total interfering clusters seen
  std::int64_t interferer_active = 0;  // of which relayed
};

struct McResult {
  double outage_prob = 0.0;
  double std_error = 0.0;  // binomial, sqrt(p(1-p)/n)
  McCounts counts;
  double window_radius = 0.0;   // radius actually simulated
  double activation_prob = 0.0; // rule's marginal firing rate (p_r, or the
                                // estimated rate under MarginalProbability)
};

// Estimates the typical pair's outage probability over opts.realizations
// independent field realizations. Every realization consumes the same
// number of draws from its own substream for a fixed activation rule, so
// results are bit-identical across worker counts and comparable across
// schemes and threshold values at a shared seed. Draw order per
// realization: typical offset (2), typical activation uniform, typical
// fadings h_sr h_sd h_rd, interferer count, then per interferer: position
// (2), activation uniform, destination direction, offset (2), four path
// fadings, and for threshold rules one own-channel exponential.
McResult estimate_op(const NetworkParams& p, McScheme scheme,
                     const McOptions& opts);

// Outage curve over a grid of relaying probabilities. Every grid point
// reuses opts.seed, so realization index i sees the same field draws at
// every p_r (common random numbers); a grid containing 0 or 1 reproduces
// the corresponding single-point estimate exactly.
std::vector<McResult> estimate_op_curve(const NetworkParams& p,
                                        const std::vector<double>& p_r_grid,
                                        McScheme scheme,
                                        const McOptions& opts);

struct ThresholdSearchResult {
  double threshold = 0.0;
  double outage_prob = 0.0;
  double std_error = 0.0;
  int evaluations = 0;
};

// Minimizes the mixed-scheme outage over the activation threshold: a 9-point
// logarithmic grid spanning the typical channel-power scale, then a golden
// section refinement in log threshold. All evaluations share opts.seed, so
// the objective is a deterministic function of the threshold. The budget
// caps the total number of outage estimations.
ThresholdSearchResult optimize_threshold(const NetworkParams& p,
                                         ActivationRule rule,
                                         const McOptions& opts,
                                         int budget = 24);

}  // namespace relaymix

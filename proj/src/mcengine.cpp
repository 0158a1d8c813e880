#include "relaymix/mcengine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include "relaymix/channel.hpp"
#include "relaymix/errors.hpp"
#include "relaymix/geometry.hpp"
#include "relaymix/rng.hpp"

namespace relaymix {
namespace {

constexpr std::uint64_t marginal_rate_stream = 0xFFFFFFFFFFFFull;

bool is_threshold_rule(ActivationRule rule) {
  return rule != ActivationRule::Bernoulli;
}

void check_options(const NetworkParams& p, McScheme scheme,
                   const McOptions& o) {
  require_valid(p);
  if (o.realizations < 1)
    throw ValidationError("realizations must be at least 1");
  if (o.workers < 1) throw ValidationError("workers must be at least 1");
  if (o.window_radius < 0.0)
    throw ValidationError("window_radius must be non-negative");
  if (is_threshold_rule(o.activation) && !(o.threshold_value >= 0.0))
    throw ValidationError(
        "threshold rules need a non-negative threshold_value");
  if (scheme != McScheme::DirectOnly &&
      p.rho != std::complex<double>{0.0, 0.0})
    throw UnsupportedCorrelation(
        "relayed decoding requires independent codebooks (rho = 0)");
}

// Marginal firing rate of a threshold rule over the offset law, estimated
// once per run on a dedicated substream.
double marginal_firing_rate(const NetworkParams& p, ActivationRule rule,
                            double threshold, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, marginal_rate_stream);
  const Vec2 own_dest{p.dest_distance, 0.0};
  const int m = 1 << 16;
  int fired = 0;
  for (int i = 0; i < m; ++i) {
    const Vec2 k = sample_relay_offset(p, 0.0, rng);
    const double gain = rng.exponential();
    const double d = rule == ActivationRule::SourceRelayThreshold
                         ? norm(k)
                         : dist(k, own_dest);
    if (gain * std::pow(d, -p.alpha) > threshold) ++fired;
  }
  return static_cast<double>(fired) / m;
}

struct SimContext {
  const NetworkParams& p;
  McScheme scheme;
  const McOptions& o;
  SimulationWindow window;
  double poisson_mean;
  double activation_prob;  // Bernoulli coin for interferers when applicable
};

void simulate_one(const SimContext& ctx, std::uint64_t index,
                  McCounts& acc) {
  const NetworkParams& p = ctx.p;
  const McOptions& o = ctx.o;
  Rng rng = Rng::substream(o.seed, index);
  const Vec2 dest{p.dest_distance, 0.0};

  // Fixed draw order; see the header contract.
  MarkedRealization real;
  real.typical_relay = sample_relay_offset(p, 0.0, rng);
  real.typical_activation_u = rng.u01();
  FadingDraw fad;
  fad.h_sr = rng.unit_fading();
  fad.h_sd = rng.unit_fading();
  fad.h_rd = rng.unit_fading();

  const std::size_t n =
      static_cast<std::size_t>(rng.poisson(ctx.poisson_mean));
  real.sources.reserve(n);
  real.marks.reserve(n);
  fad.src_to_relay.reserve(n);
  fad.src_to_dest.reserve(n);
  fad.rel_to_relay.reserve(n);
  fad.rel_to_dest.reserve(n);
  const bool threshold_rule = is_threshold_rule(o.activation);
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = ctx.window.radius * std::sqrt(rng.u01());
    const double angle = rng.uniform(0.0, two_pi);
    const Vec2 x{ctx.window.center.x + radius * std::cos(angle),
                 ctx.window.center.y + radius * std::sin(angle)};
    ClusterMark mark;
    mark.activation_u = rng.u01();
    mark.dest_direction = rng.uniform(0.0, two_pi);
    mark.relay_offset = sample_relay_offset(p, mark.dest_direction, rng);
    fad.src_to_relay.push_back(rng.unit_fading());
    fad.src_to_dest.push_back(rng.unit_fading());
    fad.rel_to_relay.push_back(rng.unit_fading());
    fad.rel_to_dest.push_back(rng.unit_fading());
    if (threshold_rule) {
      const double own_gain = rng.exponential();
      if (o.field_rule == ThresholdFieldRule::FieldConsistent) {
        const double d =
            o.activation == ActivationRule::SourceRelayThreshold
                ? norm(mark.relay_offset)
                : dist(mark.relay_offset,
                       Vec2{p.dest_distance * std::cos(mark.dest_direction),
                            p.dest_distance * std::sin(mark.dest_direction)});
        mark.relay_active =
            own_gain * std::pow(d, -p.alpha) > o.threshold_value;
      } else {
        mark.relay_active = mark.activation_u < ctx.activation_prob;
      }
    } else {
      mark.relay_active = mark.activation_u < p.p_r;
    }
    real.sources.push_back(x);
    real.marks.push_back(mark);
    ++acc.interferers;
    if (mark.relay_active) ++acc.interferer_active;
  }

  bool relayed;
  switch (ctx.scheme) {
    case McScheme::DirectOnly:
      relayed = false;
      break;
    case McScheme::RelayAlways:
      relayed = true;
      break;
    default:
      if (o.activation == ActivationRule::SourceRelayThreshold) {
        relayed = std::norm(fad.h_sr) *
                      path_loss(Vec2{0.0, 0.0}, real.typical_relay,
                                p.alpha) >
                  o.threshold_value;
      } else if (o.activation == ActivationRule::RelayDestThreshold) {
        relayed = std::norm(fad.h_rd) *
                      path_loss(real.typical_relay, dest, p.alpha) >
                  o.threshold_value;
      } else {
        relayed = real.typical_activation_u < p.p_r;
      }
  }
  real.typical_active = relayed;

  auto field_at = [&](Vec2 at, Receiver rx) {
    return o.far_field ? interference_farfield(real, fad, at, rx, p)
                       : interference_exact(real, fad, at, rx, p);
  };
  const double i_dest = field_at(dest, Receiver::Destination);
  const double i_relay =
      relayed ? field_at(real.typical_relay, Receiver::TypicalRelay) : 0.0;
  const OutageFlags flags =
      outage_event(fad, real.typical_relay, p, i_relay, i_dest,
                   relayed ? CoopScheme::DecodeForward
                           : CoopScheme::DirectOnly);

  ++acc.realizations;
  if (flags.outage) ++acc.outages;
  if (relayed) {
    ++acc.relay_mode;
    if (flags.outage) ++acc.relay_outage;
    if (flags.relay_decode_fail) ++acc.relay_decode_fail;
    if (flags.combined_fail) ++acc.combined_fail;
  } else if (flags.outage) {
    ++acc.direct_fail;
  }
}

}  // namespace

McResult estimate_op(const NetworkParams& p, McScheme scheme,
                     const McOptions& opts) {
  check_options(p, scheme, opts);
  SimContext ctx{p, scheme, opts, default_window(p), 0.0, p.p_r};
  if (opts.window_radius > 0.0) ctx.window.radius = opts.window_radius;
  ctx.poisson_mean =
      p.lambda_s * pi * ctx.window.radius * ctx.window.radius;
  if (is_threshold_rule(opts.activation))
    ctx.activation_prob = marginal_firing_rate(
        p, opts.activation, opts.threshold_value, opts.seed);

  const int workers =
      static_cast<int>(std::min<std::int64_t>(opts.workers,
                                              opts.realizations));
  std::vector<McCounts> partial(workers);
  auto run_range = [&](std::int64_t lo, std::int64_t hi, McCounts& acc) {
    for (std::int64_t i = lo; i < hi; ++i)
      simulate_one(ctx, static_cast<std::uint64_t>(i), acc);
  };
  if (workers == 1) {
    run_range(0, opts.realizations, partial[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = opts.realizations * w / workers;
      const std::int64_t hi = opts.realizations * (w + 1) / workers;
      pool.emplace_back(run_range, lo, hi, std::ref(partial[w]));
    }
    for (auto& t : pool) t.join();
  }

  McResult res;
  for (const auto& c : partial) {
    res.counts.realizations += c.realizations;
    res.counts.outages += c.outages;
    res.counts.relay_mode += c.relay_mode;
    res.counts.relay_outage += c.relay_outage;
    res.counts.relay_decode_fail += c.relay_decode_fail;
    res.counts.combined_fail += c.combined_fail;
    res.counts.direct_fail += c.direct_fail;
    res.counts.interferers += c.interferers;
    res.counts.interferer_active += c.interferer_active;
  }
  const double n = static_cast<double>(res.counts.realizations);
  res.outage_prob = static_cast<double>(res.counts.outages) / n;
  res.std_error =
      std::sqrt(res.outage_prob * (1.0 - res.outage_prob) / n);
  res.window_radius = ctx.window.radius;
  res.activation_prob = ctx.activation_prob;
  return res;
}

std::vector<McResult> estimate_op_curve(const NetworkParams& p,
                                        const std::vector<double>& p_r_grid,
                                        McScheme scheme,
                                        const McOptions& opts) {
  if (p_r_grid.empty())
    throw ValidationError("p_r_grid must not be empty");
  std::vector<McResult> out;
  out.reserve(p_r_grid.size());
  NetworkParams q = p;
  for (double p_r : p_r_grid) {
    if (!(p_r >= 0.0 && p_r <= 1.0))
      throw ValidationError("p_r grid values must lie in [0, 1]");
    q.p_r = p_r;
    out.push_back(estimate_op(q, scheme, opts));
  }
  return out;
}

ThresholdSearchResult optimize_threshold(const NetworkParams& p,
                                         ActivationRule rule,
                                         const McOptions& opts,
                                         int budget) {
  if (!is_threshold_rule(rule))
    throw ValidationError("threshold search needs a threshold rule");
  if (budget < 8)
    throw ValidationError("search budget must be at least 8 evaluations");
  const DerivedScalars ds = derive_scalars(p);
  // Typical squared link length under the rule, setting the power scale the
  // threshold competes against.
  double mean_sq;
  if (rule == ActivationRule::SourceRelayThreshold) {
    mean_sq = 2.0 * ds.sigma_k * ds.sigma_k;
  } else {
    const double half = 0.5 * p.phi0;
    const double mean_kx =
        ds.sigma_k * std::sqrt(pi / 2.0) * std::sin(half) / half;
    mean_sq = p.dest_distance * p.dest_distance -
              2.0 * p.dest_distance * mean_kx +
              2.0 * ds.sigma_k * ds.sigma_k;
  }
  const double scale = std::pow(mean_sq, -0.5 * p.alpha);

  McOptions run = opts;
  run.activation = rule;
  int evals = 0;
  ThresholdSearchResult best;
  best.outage_prob = 2.0;
  auto objective = [&](double log10_t) {
    run.threshold_value = std::pow(10.0, log10_t) * scale;
    const McResult r = estimate_op(p, McScheme::Mixed, run);
    ++evals;
    if (r.outage_prob < best.outage_prob) {
      best.threshold = run.threshold_value;
      best.outage_prob = r.outage_prob;
      best.std_error = r.std_error;
    }
    return r.outage_prob;
  };

  // Logarithmic grid over eight decades around the channel-power scale,
  // shrunk when the budget leaves fewer than nine points plus refinement.
  const int grid = std::min(9, budget - 2);
  const double step = 8.0 / (grid - 1);
  int best_cell = 0;
  double best_val = 2.0;
  for (int g = 0; g < grid; ++g) {
    const double v = objective(-6.0 + g * step);
    if (v < best_val) {
      best_val = v;
      best_cell = g;
    }
  }
  double lo = -6.0 + std::max(best_cell - 1, 0) * step;
  double hi = -6.0 + std::min(best_cell + 1, grid - 1) * step;
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (evals < budget && hi - lo > 1e-3) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  best.evaluations = evals;
  return best;
}

}  // namespace relaymix

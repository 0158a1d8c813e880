#include "relaymix/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "relaymix/errors.hpp"
#include "relaymix/quadrature.hpp"
#include "relaymix/rng.hpp"

namespace relaymix {
namespace {

void check_probability_arg(double p_r) {
  if (!(p_r >= 0.0 && p_r <= 1.0))
    throw ValidationError("p_r argument must lie in [0, 1]");
}

void check_omega(double omega, const char* name) {
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw ValidationError(std::string(name) +
                          " must be finite and non-negative");
}

void check_independent_paths(const NetworkParams& p) {
  if (p.rho != std::complex<double>{0.0, 0.0})
    throw UnsupportedCorrelation(
        "exact transforms require independent per-path fading (rho = 0)");
}

// log(1 + omega ||x-a||^-alpha) for one interfering path; the log1p form
// keeps the cluster product accurate when every factor is close to one.
double path_log_term(double omega, Vec2 x, Vec2 a, double alpha) {
  if (omega == 0.0) return 0.0;
  const Vec2 g = x - a;
  const double d2 = g.x * g.x + g.y * g.y;
  return std::log1p(omega * std::pow(d2, -0.5 * alpha));
}

struct StratumAcc {
  double sum = 0.0;
  double sumsq = 0.0;
  std::int64_t n = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
  double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
  // Variance of the mean estimate.
  double mean_var() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = sum / nn;
    const double s2 = std::max(0.0, (sumsq - nn * m * m) / (nn - 1.0));
    return s2 / nn;
  }
};

}  // namespace

double lt_interference_closed(double omega, const NetworkParams& p,
                              double p_r) {
  require_valid(p);
  check_probability_arg(p_r);
  check_independent_paths(p);
  check_omega(omega, "omega");
  const double c = interference_constant(p.alpha);
  const double exponent = p.lambda_s * c * std::pow(omega, 2.0 / p.alpha) *
                          (1.0 + 2.0 * p_r / p.alpha);
  return std::exp(-exponent);
}

PairExponentResult relay_cluster_exponent(double omega_dest,
                                          double omega_relay,
                                          const NetworkParams& p,
                                          Vec2 relay_pos,
                                          const LtOptions& opts) {
  require_valid(p);
  check_independent_paths(p);
  check_omega(omega_dest, "omega_dest");
  check_omega(omega_relay, "omega_relay");
  if (opts.t_min_samples < 2 || opts.t_max_samples < opts.t_min_samples)
    throw ValidationError("sample budget must satisfy 2 <= min <= max");

  const double alpha = p.alpha;
  const double sigma_k = derive_scalars(p).sigma_k;
  const Vec2 dest{p.dest_distance, 0.0};
  const Vec2 center = 0.5 * (dest + relay_pos);
  const double half_gap = 0.5 * dist(dest, relay_pos);
  const double peak_width = std::max(std::pow(omega_dest, 1.0 / alpha),
                                     std::pow(omega_relay, 1.0 / alpha));
  // Core disk covering both receivers, the cluster offset spread, and the
  // O(1) region of the integrand; the Pareto tail density decays like
  // rho^-alpha, matching the integrand, so tail weights stay bounded.
  const double u0 = 2.0 * half_gap + 2.0 * peak_width + 4.0 * sigma_k + 1.0;
  const double core_area = pi * u0 * u0;
  const double tail_norm = two_pi / ((alpha - 2.0) *
                                     std::pow(u0, alpha - 2.0));

  Rng core_rng = Rng::substream(opts.seed, 1);
  Rng tail_rng = Rng::substream(opts.seed, 2);

  // The marginal relay offset of an interfering cluster is isotropic: its
  // own destination direction is uniform, so the cone folds out.
  auto deficit = [&](Vec2 x, Rng& rng) {
    const double kr = rng.rayleigh(sigma_k);
    const double ka = rng.uniform(0.0, two_pi);
    const Vec2 xr{x.x + kr * std::cos(ka), x.y + kr * std::sin(ka)};
    const double s = path_log_term(omega_dest, x, dest, alpha) +
                     path_log_term(omega_dest, xr, dest, alpha) +
                     path_log_term(omega_relay, x, relay_pos, alpha) +
                     path_log_term(omega_relay, xr, relay_pos, alpha);
    return -std::expm1(-s);
  };

  StratumAcc core;
  StratumAcc tail;
  auto draw_core = [&] {
    const double r = u0 * std::sqrt(core_rng.u01());
    const double a = core_rng.uniform(0.0, two_pi);
    const Vec2 x{center.x + r * std::cos(a), center.y + r * std::sin(a)};
    core.add(deficit(x, core_rng));
  };
  auto draw_tail = [&] {
    const double u = tail_rng.u01_open();
    const double r = u0 * std::pow(u, -1.0 / (alpha - 2.0));
    const double a = tail_rng.uniform(0.0, two_pi);
    const Vec2 x{center.x + r * std::cos(a), center.y + r * std::sin(a)};
    const double w = tail_norm * std::pow(r, alpha);
    tail.add(w * deficit(x, tail_rng));
  };

  auto estimate = [&] {
    const double value = core_area * core.mean() + tail.mean();
    const double var = core_area * core_area * core.mean_var() +
                       tail.mean_var();
    return std::pair<double, double>{value, std::sqrt(var)};
  };

  const std::int64_t pilot = std::max<std::int64_t>(opts.t_min_samples, 64);
  for (std::int64_t i = 0; i < (6 * pilot) / 10; ++i) draw_core();
  while (core.n + tail.n < pilot) draw_tail();

  double value = 0.0;
  double se = 0.0;
  for (;;) {
    auto [v, s] = estimate();
    value = v;
    se = s;
    const double rel = se / std::max(std::abs(value), 1e-300);
    if (rel <= opts.t_target_rel_error) break;
    const std::int64_t total = core.n + tail.n;
    if (total >= opts.t_max_samples) {
      if (opts.throw_on_budget)
        throw IntegrationBudgetExceeded(
            "pair exponent stalled at relative error " + std::to_string(rel),
            rel);
      break;
    }
    const std::int64_t add = std::min(total, opts.t_max_samples - total);
    // Neyman split by per-stratum contribution to the variance.
    const double sc = core_area * std::sqrt(core.mean_var() *
                                            static_cast<double>(core.n));
    const double st = std::sqrt(tail.mean_var() *
                                static_cast<double>(tail.n));
    double share = sc + st > 0.0 ? sc / (sc + st) : 0.5;
    share = std::clamp(share, 0.1, 0.9);
    const std::int64_t add_core =
        std::clamp<std::int64_t>(std::llround(share * add), 1, add - 1);
    for (std::int64_t i = 0; i < add_core; ++i) draw_core();
    for (std::int64_t i = 0; i < add - add_core; ++i) draw_tail();
  }
  return {value, se, core.n + tail.n};
}

double receiver_overlap_integral(double omega_dest, double omega_relay,
                                 Vec2 dest, Vec2 relay_pos, double alpha,
                                 double abs_tol, bool check_refinement) {
  if (!(alpha > 2.0))
    throw ValidationError("alpha must exceed 2");
  check_omega(omega_dest, "omega_dest");
  check_omega(omega_relay, "omega_relay");
  if (!(abs_tol > 0.0))
    throw ValidationError("abs_tol must be positive");
  if (omega_dest == 0.0 || omega_relay == 0.0) return 0.0;

  const Vec2 mid = 0.5 * (dest + relay_pos);
  const double h = 0.5 * dist(dest, relay_pos);
  const double axis = h > 0.0 ? std::atan2(dest.y - mid.y, dest.x - mid.x)
                              : 0.0;
  const double wd = std::pow(omega_dest, 1.0 / alpha);
  const double wr = std::pow(omega_relay, 1.0 / alpha);
  const double wmax = std::max(wd, wr);
  const double wmin = std::max(std::min(wd, wr), 1e-6 * wmax);

  // Truncation radius from the centered power-law tail, padded so the
  // off-center peaks stay well inside.
  const double tail_pow = 2.0 * alpha - 2.0;
  const double r_cut =
      std::pow(8.0 * pi * omega_dest * omega_relay / (tail_pow * abs_tol),
               1.0 / tail_pow) +
      2.0 * h + 2.0 * wmax;

  std::vector<double> radial{0.0};
  if (h > 0.25 * wmax) {
    for (double f : {0.25, 0.5, 0.75, 1.5, 2.0, 3.0}) {
      const double e = h * f;
      if (e > 0.0 && e < r_cut) radial.push_back(e);
    }
    for (double off : {0.25 * wmin, wmin, 0.25 * wmax, 0.5 * wmax, wmax,
                       2.0 * wmax, 4.0 * wmax}) {
      for (double side : {-1.0, 1.0}) {
        const double e = h + side * off;
        if (e > 0.0 && e < r_cut) radial.push_back(e);
      }
    }
    radial.push_back(std::min(h, r_cut));
  } else {
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double e = wmax * f;
      if (e > 0.0 && e < r_cut) radial.push_back(e);
    }
  }
  std::sort(radial.begin(), radial.end());
  double grow = std::max(radial.back(), 0.25 * wmax);
  while (grow < r_cut) {
    grow *= 1.7;
    radial.push_back(std::min(grow, r_cut));
  }
  if (radial.back() < r_cut) radial.push_back(r_cut);
  radial.erase(std::unique(radial.begin(), radial.end(),
                           [&](double a, double b) {
                             return b - a < 1e-9 * r_cut;
                           }),
               radial.end());

  // The integrand is symmetric about the receiver axis; integrate half the
  // angle range and double. Graded edges resolve the peaks at psi = 0, pi.
  const double delta =
      std::clamp(h > 0.0 ? wmax / h : pi / 2.0, 0.02, pi / 2.0);
  std::vector<double> angle{0.0, pi};
  for (double f : {0.25 * delta, 0.5 * delta, delta, 2.0 * delta,
                   4.0 * delta, pi / 2.0}) {
    if (f > 0.0 && f < pi) {
      angle.push_back(f);
      angle.push_back(pi - f);
    }
  }
  std::sort(angle.begin(), angle.end());
  angle.erase(std::unique(angle.begin(), angle.end(),
                          [](double a, double b) { return b - a < 1e-12; }),
              angle.end());

  const auto& rule = quad::gauss_rule(16);
  auto bump = [&](double omega, double d2) {
    return 1.0 / (1.0 + std::pow(d2, 0.5 * alpha) / omega);
  };
  auto value = [&](const std::vector<double>& redges,
                   const std::vector<double>& aedges) {
    auto ring = [&](double r) {
      auto along = [&](double psi) {
        const double c = std::cos(axis + psi);
        const double s = std::sin(axis + psi);
        const Vec2 x{mid.x + r * c, mid.y + r * s};
        const Vec2 gd = x - dest;
        const Vec2 gr = x - relay_pos;
        return bump(omega_dest, gd.x * gd.x + gd.y * gd.y) *
               bump(omega_relay, gr.x * gr.x + gr.y * gr.y);
      };
      return 2.0 * r * quad::composite(along, aedges, rule);
    };
    return quad::composite(ring, redges, rule);
  };

  const double tail_est = two_pi * omega_dest * omega_relay *
                          std::pow(r_cut, -tail_pow) / tail_pow;
  const double coarse = value(radial, angle);
  if (!check_refinement) return coarse + tail_est;
  const double fine =
      value(quad::split_edges(radial), quad::split_edges(angle));
  if (std::abs(fine - coarse) > 0.5 * abs_tol)
    throw QuadratureNonConvergence(
        "overlap integral refinement moved by " +
        std::to_string(std::abs(fine - coarse)));
  return fine + tail_est;
}

JointLtResult lt_interference_joint(double omega_dest, double omega_relay,
                                    const NetworkParams& p, double p_r,
                                    Vec2 relay_pos, const LtOptions& opts) {
  require_valid(p);
  check_probability_arg(p_r);
  check_independent_paths(p);
  check_omega(omega_dest, "omega_dest");
  check_omega(omega_relay, "omega_relay");

  JointLtResult res;
  if (p_r > 0.0) {
    const auto pair =
        relay_cluster_exponent(omega_dest, omega_relay, p, relay_pos, opts);
    res.pair_exponent = pair.value;
    res.pair_std_error = pair.std_error;
    res.pair_samples = pair.samples;
  }
  if (p_r < 1.0)
    res.overlap = receiver_overlap_integral(
        omega_dest, omega_relay, Vec2{p.dest_distance, 0.0}, relay_pos,
        p.alpha, opts.f_abs_tol);

  const double inv = 2.0 / p.alpha;
  const double marginal = interference_constant(p.alpha) *
                          (std::pow(omega_dest, inv) +
                           std::pow(omega_relay, inv));
  res.exponent = p.lambda_s * (p_r * res.pair_exponent +
                               (1.0 - p_r) * (marginal - res.overlap));
  res.value = std::exp(-res.exponent);
  return res;
}

double relay_mode_fail_prob(const NetworkParams& p, double p_r,
                            Vec2 relay_pos, const LtOptions& opts) {
  require_valid(p);
  check_probability_arg(p_r);
  check_independent_paths(p);
  const double alpha = p.alpha;
  const double big_d = p.dest_distance;
  const double threshold = threshold_from_rate(p.rate);
  const Vec2 dest{big_d, 0.0};
  const double gap = dist(relay_pos, dest);
  const double omega_relay = threshold * std::pow(norm(relay_pos), alpha);
  const double omega_direct = threshold * std::pow(big_d, alpha);

  auto lt = [&](double omega_dest) {
    return lt_interference_joint(omega_dest, omega_relay, p, p_r, relay_pos,
                                 opts)
        .value;
  };

  double success;
  if (std::abs(gap / big_d - 1.0) < 1e-6) {
    // Removable singularity of the two-point quotient: take the tangent
    // value via a centered difference. Shared seeds keep the three
    // evaluations on common samples, so the difference stays smooth.
    const double step = 1e-4;
    const double mid = lt(omega_direct);
    const double hi = lt(omega_direct * (1.0 + step));
    const double lo = lt(omega_direct * (1.0 - step));
    success = mid - (hi - lo) / (2.0 * step);
  } else {
    const double v = std::pow(gap, alpha);
    const double da = std::pow(big_d, alpha);
    const double l_hop = lt(threshold * v);
    const double l_direct = lt(omega_direct);
    success = (da * l_hop - v * l_direct) / (da - v);
  }
  return std::clamp(1.0 - success, 0.0, 1.0);
}

ExactOutageResult op_mix_exact(const NetworkParams& p, double p_r,
                               const ExactOutageOptions& opts) {
  require_valid(p);
  check_probability_arg(p_r);
  check_independent_paths(p);
  if (opts.r_samples < 1)
    throw ValidationError("r_samples must be at least 1");

  const double threshold = threshold_from_rate(p.rate);
  const double omega_direct =
      threshold * std::pow(p.dest_distance, p.alpha);
  const Vec2 dest{p.dest_distance, 0.0};

  ExactOutageResult res;
  // Non-relayed mode: single-receiver transform. The closed marginal term
  // is written through nu so that p_r = 0 collapses bit-exactly to op_dt.
  double pair_direct = 0.0;
  if (p_r > 0.0) {
    LtOptions direct_opts = opts.inner;
    direct_opts.seed = mix64(opts.seed, 0x8000000000000000ull);
    pair_direct =
        relay_cluster_exponent(omega_direct, 0.0, p, dest, direct_opts)
            .value;
  }
  const double direct_exponent =
      p.lambda_s * p_r * pair_direct + (1.0 - p_r) * nu_of(p, 0.0);
  res.direct_fail = -std::expm1(-direct_exponent);

  double se = 0.0;
  if (p_r > 0.0) {
    StratumAcc acc;
    for (std::int64_t i = 0; i < opts.r_samples; ++i) {
      Rng pos_rng =
          Rng::substream(opts.seed, (std::uint64_t{1} << 32) + i);
      const Vec2 r = sample_relay_offset(p, 0.0, pos_rng);
      LtOptions inner = opts.inner;
      inner.seed = mix64(opts.seed, static_cast<std::uint64_t>(i));
      acc.add(relay_mode_fail_prob(p, p_r, r, inner));
    }
    res.relay_fail = acc.mean();
    se = std::sqrt(acc.mean_var());
  }
  res.value = (1.0 - p_r) * res.direct_fail + p_r * res.relay_fail;
  res.std_error = p_r * se;
  return res;
}

}  // namespace relaymix

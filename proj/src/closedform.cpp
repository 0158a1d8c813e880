#include "relaymix/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "relaymix/errors.hpp"
#include "relaymix/quadrature.hpp"
#include "relaymix/special_functions.hpp"

namespace relaymix {
namespace {

void check_probability_arg(double p_r) {
  if (!(p_r >= 0.0 && p_r <= 1.0))
    throw ValidationError("p_r argument must lie in [0, 1]");
}

double sigma_k_of(double sigma_in, double phi0) {
  return std::sqrt(two_pi / phi0) * sigma_in;
}

BoundResult bound_with_distance(const NetworkParams& p, double p_r,
                                double erd) {
  const double alpha = p.alpha;
  const double d = p.dest_distance;
  const double delta_mix = delta_mix_of(p, p_r);
  const double nu = p.lambda_s * delta_mix * d * d;
  const double relay_keep =
      p.phi0 * p.lambda_in / (p.phi0 * p.lambda_in + 2.0 * p.lambda_s * delta_mix);
  const double tilt = 1.0 + (2.0 - alpha) / (alpha * d) * erd;
  const double relay_term =
      2.0 - relay_keep - std::exp(-nu) * (1.0 + nu * tilt);
  const double raw =
      (1.0 - p_r) * -std::expm1(-nu) + p_r * relay_term;
  BoundResult res{raw, false};
  if (raw < 0.0 || raw > 1.0) {
    res.value = std::clamp(raw, 0.0, 1.0);
    res.clamped = true;
  }
  return res;
}

// Residuals are strictly increasing in sigma; roots found by a 64-interval
// scan for the first sign change followed by bisection.
double increasing_root(const std::function<double(double)>& residual,
                       double upper, const char* what) {
  const int cells = 64;
  double lo = 0.0, hi = 0.0;
  double prev = 1e-12 * upper;
  double prev_val = residual(prev);
  if (prev_val >= 0.0) return prev;
  for (int j = 1; j <= cells; ++j) {
    const double x = upper * j / cells;
    const double v = residual(x);
    if (v >= 0.0) {
      lo = prev;
      hi = x;
      break;
    }
    prev = x;
    prev_val = v;
  }
  if (hi == 0.0)
    throw RootNotBracketed(std::string(what) +
                           ": no sign change up to 2 D sqrt(phi0/2pi)");
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double op_dt(const NetworkParams& p) {
  require_valid(p);
  return -std::expm1(-nu_of(p, 0.0));
}

BoundResult op_mix_upper_bound(const NetworkParams& p, double p_r) {
  require_valid(p);
  check_probability_arg(p_r);
  const double erd = expected_relay_dest_distance(p);
  return bound_with_distance(p, p_r, erd);
}

double nuttall_q20(double s) {
  if (!(s >= 0.0)) throw ValidationError("nuttall_q20 requires s >= 0");
  const double x = 0.25 * s * s;
  // Scaled Bessel values absorb the e^{-s^2/4} prefactor exactly.
  return std::sqrt(pi / 8.0) *
         ((s * s + 2.0) * bessel_i0e(x) + s * s * bessel_i1e(x));
}

namespace {

// Radial integral in the scaled radius w = rho / sigma_k against the
// Rayleigh weight w e^{-w^2/2}, crossed with graded angle panels that
// absorb the weak singularity of the radial profile at phi = 0 (present
// when sigma_k is comparable to the separation).
double cone_distance_mesh(double sk, double d, double phi0,
                          const std::vector<double>& redges,
                          const std::vector<double>& aedges,
                          const quad::GaussRule& rule) {
  auto outer = [&](double ang) {
    const double cx = d * std::cos(ang);
    const double cy = d * std::sin(ang);
    auto inner = [&](double w) {
      return w * std::exp(-0.5 * w * w) * std::hypot(sk * w - cx, cy);
    };
    // The derivative turns sharply where sk w = cx; split there and grade
    // panels outward at the local curvature width.
    std::vector<double> edges = redges;
    const double wk = cx / sk;
    if (wk > edges.front() && wk < edges.back()) {
      edges.push_back(wk);
      const double width = std::abs(cy) / sk;
      for (double scale : {1.0, 4.0, 16.0, 64.0}) {
        for (double side : {-1.0, 1.0}) {
          const double e = wk + side * scale * width;
          if (e > edges.front() && e < edges.back()) edges.push_back(e);
        }
      }
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    return quad::composite(inner, edges, rule);
  };
  return quad::composite(outer, aedges, rule) / phi0;
}

std::vector<double> angle_edges(double phi0,
                                const std::vector<double>& fractions) {
  const double half = 0.5 * phi0;
  std::vector<double> angle{0.0};
  for (double f : fractions) {
    angle.push_back(half * f);
    angle.push_back(-half * f);
  }
  std::sort(angle.begin(), angle.end());
  return angle;
}

// Pruned mesh without the refinement pass, for search loops that evaluate
// the expectation thousands of times; still accurate to ~1e-7 relative.
double cone_distance_coarse(double sigma_in, double phi0, double d) {
  const double sk = sigma_k_of(sigma_in, phi0);
  const std::vector<double> radial{0.0, 0.4, 1.0, 1.8, 2.9,
                                   4.5, 7.0, 10.0, 16.0};
  const std::vector<double> fractions{1.0 / 1024, 1.0 / 128, 1.0 / 32,
                                      1.0 / 8,    1.0 / 4,   1.0 / 2,
                                      3.0 / 4,    1.0};
  return cone_distance_mesh(sk, d, phi0, radial, angle_edges(phi0, fractions),
                            quad::gauss_rule(12));
}

}  // namespace

double expected_relay_dest_distance_quadrature(double sigma_in, double phi0,
                                               double dest_distance,
                                               double abs_tol) {
  const double sk = sigma_k_of(sigma_in, phi0);
  const double d = dest_distance;
  const auto& rule = quad::gauss_rule(24);
  // Mass beyond w = 16 is below 3e-56.
  const std::vector<double> radial{0.0, 0.2, 0.4, 0.7, 1.0, 1.4, 1.8, 2.3,
                                   2.9, 3.6, 4.5, 5.5, 7.0, 9.0, 12.0, 16.0};
  const std::vector<double> fractions{
      1.0 / 4096, 1.0 / 1024, 1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32,
      1.0 / 16,   1.0 / 8,    3.0 / 16,  1.0 / 4,   3.0 / 8,  1.0 / 2,
      5.0 / 8,    3.0 / 4,    7.0 / 8,   1.0};
  const std::vector<double> angle = angle_edges(phi0, fractions);

  const double coarse = cone_distance_mesh(sk, d, phi0, radial, angle, rule);
  const double fine =
      cone_distance_mesh(sk, d, phi0, quad::split_edges(radial),
                         quad::split_edges(angle), rule);
  if (std::abs(fine - coarse) > abs_tol)
    throw QuadratureNonConvergence(
        "cone distance quadrature refinement moved by " +
        std::to_string(std::abs(fine - coarse)));
  return fine;
}

double expected_relay_dest_distance(double sigma_in, double phi0,
                                    double dest_distance) {
  if (!(sigma_in > 0.0))
    throw ValidationError("sigma_in must be positive");
  if (!(phi0 > 0.0) || phi0 > two_pi * (1.0 + 1e-12))
    throw ValidationError("phi0 must lie in (0, 2pi]");
  if (!(dest_distance >= 0.0))
    throw ValidationError("dest_distance must be non-negative");
  const double sk = sigma_k_of(sigma_in, phi0);
  if (dest_distance == 0.0) return sk * std::sqrt(pi / 2.0);
  if (std::abs(phi0 - two_pi) <= 1e-12 * two_pi)
    return sk * nuttall_q20(dest_distance / sk);
  // The expectation grows like sigma_k once the scatter dwarfs the
  // separation, so the accuracy demand must scale with both lengths.
  return expected_relay_dest_distance_quadrature(
      sigma_in, phi0, dest_distance,
      1e-6 * std::max(dest_distance, sk));
}

double expected_relay_dest_distance(const NetworkParams& p) {
  require_valid(p);
  return expected_relay_dest_distance(sigma_in_of(p.lambda_in), p.phi0,
                                      p.dest_distance);
}

double gamma_factor(double s, double phi0) {
  if (!(s > 0.0)) throw ValidationError("gamma_factor requires s > 0");
  if (!(phi0 > 0.0) || phi0 > two_pi * (1.0 + 1e-12))
    throw ValidationError("phi0 must lie in (0, 2pi]");
  const double shape = 8.0 * (1.0 - std::cos(phi0 / 4.0)) / phi0 - 2.0;
  return std::sqrt(pi / 2.0) *
         (1.0 + shape * std::erf(1.0 / (std::sqrt(2.0) * s)));
}

double expected_distance_bound(double sigma_in, double phi0,
                               double dest_distance) {
  const double s = sigma_k_of(sigma_in, phi0) / dest_distance;
  return dest_distance * (1.0 + s * gamma_factor(s, phi0));
}

SigmaResult sigma_c(const NetworkParams& p) {
  require_valid(p);
  const double hypothesis = p.lambda_s * delta_of(p.alpha, p.rate) *
                            p.dest_distance * p.dest_distance;
  if (!(hypothesis < 0.38196601125010515))
    throw HypothesisViolated(
        "concavity analysis requires lambda_s delta D^2 < (3 - sqrt 5)/2");
  const double alpha = p.alpha;
  const double d = p.dest_distance;
  auto residual = [&](double sigma) {
    return 4.0 * pi * alpha * sigma * sigma / (p.phi0 * d * d) +
           (alpha - 2.0) *
               expected_relay_dest_distance(sigma, p.phi0, d) / d -
           alpha;
  };
  SigmaResult res;
  res.root = increasing_root(residual, 2.0 * d * std::sqrt(p.phi0 / two_pi),
                             "sigma_c");
  const double phi_c = 0.25 * (1.0 - 2.0 / alpha) *
                       gamma_factor(1.0 / std::sqrt(2.0), p.phi0);
  res.closed_bound = d * std::sqrt(p.phi0 / two_pi) *
                     (std::sqrt(1.0 / alpha + phi_c * phi_c) - phi_c);
  return res;
}

SigmaResult sigma_t(const NetworkParams& p) {
  require_valid(p);
  const double alpha = p.alpha;
  const double d = p.dest_distance;
  auto residual = [&](double sigma) {
    return (1.0 + 2.0 / alpha) *
               (4.0 * pi * sigma * sigma / (p.phi0 * d * d) +
                (1.0 - 2.0 / alpha) *
                    expected_relay_dest_distance(sigma, p.phi0, d) / d) -
           1.0;
  };
  SigmaResult res;
  res.root = increasing_root(residual, 2.0 * d * std::sqrt(p.phi0 / two_pi),
                             "sigma_t");
  const double phi_t =
      0.25 * (1.0 - 2.0 / alpha) * gamma_factor(0.5, p.phi0);
  res.closed_bound =
      d * std::sqrt(p.phi0 / two_pi) *
      (std::sqrt(2.0 / (alpha * (alpha + 2.0)) + phi_t * phi_t) - phi_t);
  return res;
}

namespace {

double gain_ratio_raw(double sigma_in, double phi0, double alpha, double d) {
  return (1.0 + 2.0 / alpha) *
         (4.0 * pi * sigma_in * sigma_in / (phi0 * d * d) +
          (1.0 - 2.0 / alpha) *
              expected_relay_dest_distance(sigma_in, phi0, d) / d);
}

// Search-grade ratio using the pruned quadrature mesh; the optimizer
// re-evaluates its winner with the full-accuracy path.
double gain_ratio_search(double sigma_in, double phi0, double alpha,
                         double d) {
  double erd;
  if (std::abs(phi0 - two_pi) <= 1e-12 * two_pi) {
    const double sk = sigma_k_of(sigma_in, phi0);
    erd = sk * nuttall_q20(d / sk);
  } else {
    erd = cone_distance_coarse(sigma_in, phi0, d);
  }
  return (1.0 + 2.0 / alpha) *
         (4.0 * pi * sigma_in * sigma_in / (phi0 * d * d) +
          (1.0 - 2.0 / alpha) * erd / d);
}

}  // namespace

double op_gain_ratio(const NetworkParams& p) {
  require_valid(p);
  // The raw ratio crosses 1 exactly where the sigma_t residual crosses 0,
  // so clamping at 1 is the sigma_in > sigma_t rule.
  const double raw = gain_ratio_raw(sigma_in_of(p.lambda_in), p.phi0,
                                    p.alpha, p.dest_distance);
  return std::min(raw, 1.0);
}

ActivationAnalysis activation_decision(const NetworkParams& p) {
  ActivationAnalysis a;
  a.sigma_in = sigma_in_of(p.lambda_in);
  a.concavity = sigma_c(p);
  a.threshold = sigma_t(p);
  a.gain_ratio = op_gain_ratio(p);
  a.decided_p_r = a.sigma_in <= a.threshold.root ? 1 : 0;
  return a;
}

Phi0Result optimize_phi0(const NetworkParams& p, std::size_t grid_cells) {
  require_valid(p);
  if (grid_cells < 4)
    throw ValidationError("optimize_phi0 needs at least 4 grid cells");
  const double sigma_in = sigma_in_of(p.lambda_in);
  auto ratio = [&](double phi) {
    return std::min(
        gain_ratio_search(sigma_in, phi, p.alpha, p.dest_distance), 1.0);
  };
  std::size_t best = grid_cells;
  double best_val = ratio(two_pi);
  for (std::size_t j = grid_cells - 1; j >= 1; --j) {
    const double v = ratio(two_pi * j / grid_cells);
    if (v < best_val - 1e-15) {
      best_val = v;
      best = j;
    }
  }
  if (best == grid_cells && best_val >= 1.0 - 1e-15)
    return {two_pi, 1.0};
  const double cell = two_pi / grid_cells;
  double a = std::max(0.25 * cell, (best - 1) * cell);
  double b = std::min(two_pi, (best + 1) * cell);
  // Golden-section on the bracket around the best grid cell.
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = ratio(x1), f2 = ratio(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = ratio(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = ratio(x2);
    }
  }
  const double star = f1 <= f2 ? x1 : x2;
  const double star_val = std::min(f1, f2);
  const double winner = best_val <= star_val ? two_pi * best / grid_cells
                                             : star;
  return {winner, std::min(gain_ratio_raw(sigma_in, winner, p.alpha,
                                          p.dest_distance),
                           1.0)};
}

double max_rate_for_op(const NetworkParams& p, double op_target,
                       RateScheme scheme, double abs_tol) {
  require_valid(p);
  if (!(op_target > 0.0 && op_target < 1.0))
    throw ValidationError("op_target must lie in (0, 1)");
  // E||r-d|| does not depend on the rate; compute once.
  const double erd = scheme == RateScheme::Mix
                         ? expected_relay_dest_distance(p)
                         : 0.0;
  auto op_at = [&](double rate) {
    NetworkParams q = p;
    q.rate = rate;
    const double direct = -std::expm1(-nu_of(q, 0.0));
    if (scheme == RateScheme::Dt) return direct;
    return std::min(direct, bound_with_distance(q, 1.0, erd).value);
  };
  double lo = 1e-9;
  if (op_at(lo) > op_target)
    throw TargetUnreachable(
        "outage exceeds the target even as the rate vanishes");
  double hi = 1.0;
  while (op_at(hi) < op_target) {
    hi *= 2.0;
    if (hi > 64.0)
      throw MaxIterations(
          "no rate below 64 bits/use reaches the target outage");
  }
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    (op_at(mid) < op_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace relaymix

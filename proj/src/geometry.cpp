#include "relaymix/geometry.hpp"

#include <cmath>
#include <utility>

namespace relaymix {

SimulationWindow default_window(const NetworkParams& p) {
  require_valid(p);
  const double d2 = p.dest_distance * p.dest_distance;
  const double delta = delta_of(p.alpha, p.rate);
  // Radius where the neglected tail 2 pi lambda_s r^{2-alpha}/(alpha-2)
  // equals 1e-3 of the direct-transmission exponent lambda_s delta D^2.
  const double r_tail = std::pow(
      two_pi / (1e-3 * delta * d2 * (p.alpha - 2.0)), 1.0 / (p.alpha - 2.0));
  return {{0.5 * p.dest_distance, 0.0}, std::max(40.0 * p.dest_distance,
                                                 r_tail)};
}

std::vector<Vec2> sample_ppp(double intensity, const SimulationWindow& w,
                             Rng& rng) {
  const std::uint64_t n = rng.poisson(intensity * pi * w.radius * w.radius);
  std::vector<Vec2> pts(n);
  for (auto& pt : pts) {
    const double r = w.radius * std::sqrt(rng.u01());
    const double t = two_pi * rng.u01();
    pt = {w.center.x + r * std::cos(t), w.center.y + r * std::sin(t)};
  }
  return pts;
}

Vec2 sample_relay_offset(const NetworkParams& p, double direction, Rng& rng) {
  const double sigma_k = 1.0 / std::sqrt(p.lambda_in * p.phi0);
  const double r = rng.rayleigh(sigma_k);
  const double t = direction + p.phi0 * (rng.u01() - 0.5);
  return {r * std::cos(t), r * std::sin(t)};
}

MarkedRealization mark_realization(std::vector<Vec2> sources,
                                   const NetworkParams& p, Rng& rng) {
  MarkedRealization real;
  real.typical_relay = sample_relay_offset(p, 0.0, rng);
  real.typical_activation_u = rng.u01();
  real.typical_active = real.typical_activation_u < p.p_r;
  real.sources = std::move(sources);
  real.marks.resize(real.sources.size());
  for (auto& m : real.marks) {
    m.activation_u = rng.u01();
    m.relay_active = m.activation_u < p.p_r;
    m.dest_direction = two_pi * rng.u01();
    m.relay_offset = sample_relay_offset(p, m.dest_direction, rng);
  }
  return real;
}

}  // namespace relaymix

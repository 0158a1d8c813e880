#pragma once

#include <cmath>
#include <vector>

#include "relaymix/netmodel.hpp"
#include "relaymix/rng.hpp"

namespace relaymix {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

struct SimulationWindow {
  Vec2 center;
  double radius = 0.0;
};

// Disk holding the interferer field. The radius keeps the truncated tail's
// contribution to the outage exponent below 1e-3 of nu, and never drops below
// 40 destination distances.
SimulationWindow default_window(const NetworkParams& p);

// Homogeneous Poisson points on the window disk. Draw order per point:
// radial uniform, angle uniform.
std::vector<Vec2> sample_ppp(double intensity, const SimulationWindow& w,
                             Rng& rng);

// Relay offset from its source: radius Rayleigh(sigma_k), angle uniform on
// (direction - phi0/2, direction + phi0/2). Consumes radius then angle.
Vec2 sample_relay_offset(const NetworkParams& p, double direction, Rng& rng);

struct ClusterMark {
  double activation_u = 0.0;   // uniform driving the activation decision
  bool relay_active = false;   // activation_u < p_r
  double dest_direction = 0.0; // angle of this cluster's own destination
  Vec2 relay_offset;
};

struct MarkedRealization {
  std::vector<Vec2> sources;
  std::vector<ClusterMark> marks;
  Vec2 typical_relay;             // typical cluster's relay, cone toward (D, 0)
  double typical_activation_u = 0.0;
  bool typical_active = false;
};

// Attaches the typical cluster's relay draw followed by per-source marks.
// Fixed draw order (typical offset, typical u, then per source: activation u,
// destination direction, offset) is part of the determinism contract.
MarkedRealization mark_realization(std::vector<Vec2> sources,
                                   const NetworkParams& p, Rng& rng);

}  // namespace relaymix

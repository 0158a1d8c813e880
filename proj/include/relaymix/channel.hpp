#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "relaymix/geometry.hpp"
#include "relaymix/netmodel.hpp"
#include "relaymix/rng.hpp"

namespace relaymix {

// Rayleigh block-fading coefficients for one network realization. Typical
// links first, then per-interferer coefficients toward both receivers for the
// source (src) and the relay (rel) of each interfering cluster. Draw order:
// h_sr, h_sd, h_rd, then per cluster src->relay, src->dest, rel->relay,
// rel->dest.
struct FadingDraw {
  std::complex<double> h_sr, h_sd, h_rd;
  std::vector<std::complex<double>> src_to_relay, src_to_dest;
  std::vector<std::complex<double>> rel_to_relay, rel_to_dest;
};

FadingDraw sample_fading(std::size_t n_interferers, Rng& rng);

// ||a - b||^{-alpha}; throws CoincidentPoints at zero separation.
double path_loss(Vec2 a, Vec2 b, double alpha);

enum class Receiver { TypicalRelay, Destination };

// Exact aggregate interference power at a point: per cluster, the source
// contribution plus (if its relay is active) the relay contribution and the
// rho cross term.
double interference_exact(const MarkedRealization& real, const FadingDraw& fad,
                          Vec2 at, Receiver rx, const NetworkParams& p);

// Far-field approximation: each cluster collapses to its anchor
// source + tau * offset with combined mark |h1|^2 + eps(|h2|^2 + 2Re(h1 h2* rho)).
double interference_farfield(const MarkedRealization& real,
                             const FadingDraw& fad, Vec2 at, Receiver rx,
                             const NetworkParams& p);

// Achievable decode-and-forward rate for the typical pair given interference
// powers at the relay and destination. Requires rho = 0.
double df_rate(const FadingDraw& fad, Vec2 relay, const NetworkParams& p,
               double i_relay, double i_dest);

struct OutageFlags {
  bool relay_decode_fail = false;  // source->relay SIR below threshold
  bool combined_fail = false;      // direct + relay sum power below threshold
  bool direct_fail = false;        // direct link alone below threshold
  bool outage = false;             // the flag relevant to the chosen scheme
};

enum class CoopScheme { DecodeForward, DirectOnly };

OutageFlags outage_event(const FadingDraw& fad, Vec2 relay,
                         const NetworkParams& p, double i_relay, double i_dest,
                         CoopScheme scheme);

}  // namespace relaymix

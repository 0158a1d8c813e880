#include "relaymix/channel.hpp"

#include <cmath>
#include <limits>

#include "relaymix/errors.hpp"

namespace relaymix {

FadingDraw sample_fading(std::size_t n_interferers, Rng& rng) {
  FadingDraw f;
  f.h_sr = rng.unit_fading();
  f.h_sd = rng.unit_fading();
  f.h_rd = rng.unit_fading();
  f.src_to_relay.resize(n_interferers);
  f.src_to_dest.resize(n_interferers);
  f.rel_to_relay.resize(n_interferers);
  f.rel_to_dest.resize(n_interferers);
  for (std::size_t i = 0; i < n_interferers; ++i) {
    f.src_to_relay[i] = rng.unit_fading();
    f.src_to_dest[i] = rng.unit_fading();
    f.rel_to_relay[i] = rng.unit_fading();
    f.rel_to_dest[i] = rng.unit_fading();
  }
  return f;
}

double path_loss(Vec2 a, Vec2 b, double alpha) {
  const double d = dist(a, b);
  if (d == 0.0) throw CoincidentPoints("path loss at zero separation");
  return std::pow(d, -alpha);
}

double interference_exact(const MarkedRealization& real, const FadingDraw& fad,
                          Vec2 at, Receiver rx, const NetworkParams& p) {
  const auto& hs = rx == Receiver::TypicalRelay ? fad.src_to_relay
                                                : fad.src_to_dest;
  const auto& hr = rx == Receiver::TypicalRelay ? fad.rel_to_relay
                                                : fad.rel_to_dest;
  double total = 0.0;
  for (std::size_t i = 0; i < real.sources.size(); ++i) {
    const double l1 = path_loss(real.sources[i], at, p.alpha);
    total += std::norm(hs[i]) * l1;
    if (real.marks[i].relay_active) {
      const double l2 =
          path_loss(real.sources[i] + real.marks[i].relay_offset, at, p.alpha);
      total += std::norm(hr[i]) * l2;
      const std::complex<double> cross = hs[i] * std::conj(hr[i]) * p.rho;
      total += 2.0 * cross.real() * std::sqrt(l1 * l2);
    }
  }
  return total;
}

double interference_farfield(const MarkedRealization& real,
                             const FadingDraw& fad, Vec2 at, Receiver rx,
                             const NetworkParams& p) {
  const auto& hs = rx == Receiver::TypicalRelay ? fad.src_to_relay
                                                : fad.src_to_dest;
  const auto& hr = rx == Receiver::TypicalRelay ? fad.rel_to_relay
                                                : fad.rel_to_dest;
  double total = 0.0;
  for (std::size_t i = 0; i < real.sources.size(); ++i) {
    const Vec2 anchor = real.sources[i] + p.tau * real.marks[i].relay_offset;
    double w = std::norm(hs[i]);
    if (real.marks[i].relay_active) {
      const std::complex<double> cross = hs[i] * std::conj(hr[i]) * p.rho;
      w += std::norm(hr[i]) + 2.0 * cross.real();
    }
    total += w * path_loss(anchor, at, p.alpha);
  }
  return total;
}

namespace {

struct TypicalLinks {
  double sr, sd, rd;  // received powers over their path losses
};

TypicalLinks typical_links(const FadingDraw& fad, Vec2 relay,
                           const NetworkParams& p) {
  const Vec2 origin{0.0, 0.0};
  const Vec2 dest{p.dest_distance, 0.0};
  return {std::norm(fad.h_sr) * path_loss(origin, relay, p.alpha),
          std::norm(fad.h_sd) * path_loss(origin, dest, p.alpha),
          std::norm(fad.h_rd) * path_loss(relay, dest, p.alpha)};
}

}  // namespace

double df_rate(const FadingDraw& fad, Vec2 relay, const NetworkParams& p,
               double i_relay, double i_dest) {
  if (p.rho != std::complex<double>{0.0, 0.0})
    throw UnsupportedCorrelation(
        "decode-and-forward rate assumes uncorrelated codebooks (rho = 0)");
  const TypicalLinks l = typical_links(fad, relay, p);
  const double sir1 =
      i_relay > 0.0 ? l.sr / i_relay : std::numeric_limits<double>::infinity();
  const double sir2 = i_dest > 0.0
                          ? (l.sd + l.rd) / i_dest
                          : std::numeric_limits<double>::infinity();
  return std::min(std::log2(1.0 + sir1), std::log2(1.0 + sir2));
}

OutageFlags outage_event(const FadingDraw& fad, Vec2 relay,
                         const NetworkParams& p, double i_relay, double i_dest,
                         CoopScheme scheme) {
  const double T = threshold_from_rate(p.rate);
  const TypicalLinks l = typical_links(fad, relay, p);
  OutageFlags f;
  f.relay_decode_fail = l.sr < T * i_relay;
  f.combined_fail = l.sd + l.rd < T * i_dest;
  f.direct_fail = l.sd < T * i_dest;
  f.outage = scheme == CoopScheme::DecodeForward
                 ? (f.relay_decode_fail || f.combined_fail)
                 : f.direct_fail;
  return f;
}

}  // namespace relaymix

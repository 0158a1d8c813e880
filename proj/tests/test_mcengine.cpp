#include <cmath>
#include <complex>

#include "doctest.h"
#include "relaymix/closedform.hpp"
#include "relaymix/errors.hpp"
#include "relaymix/mcengine.hpp"
#include "relaymix/netmodel.hpp"

using namespace relaymix;

TEST_SUITE_BEGIN("mcengine");

namespace {

NetworkParams reference_params() { return NetworkParams{}; }

bool same_counts(const McCounts& a, const McCounts& b) {
  return a.realizations == b.realizations && a.outages == b.outages &&
         a.relay_mode == b.relay_mode && a.relay_outage == b.relay_outage &&
         a.relay_decode_fail == b.relay_decode_fail &&
         a.combined_fail == b.combined_fail &&
         a.direct_fail == b.direct_fail &&
         a.interferers == b.interferers &&
         a.interferer_active == b.interferer_active;
}

}  // namespace

TEST_CASE("results are invariant to the worker count") {
  NetworkParams p = reference_params();
  p.p_r = 0.6;
  McOptions o;
  o.realizations = 2000;
  o.seed = 401;
  o.workers = 1;
  const McResult r1 = estimate_op(p, McScheme::Mixed, o);
  o.workers = 3;
  const McResult r3 = estimate_op(p, McScheme::Mixed, o);
  o.workers = 8;
  const McResult r8 = estimate_op(p, McScheme::Mixed, o);
  CHECK(same_counts(r1.counts, r3.counts));
  CHECK(same_counts(r1.counts, r8.counts));
  CHECK(r1.outage_prob == r3.outage_prob);
  CHECK(r1.std_error == r8.std_error);
  // Interferer activations track the Bernoulli rate.
  const double frac = static_cast<double>(r1.counts.interferer_active) /
                      static_cast<double>(r1.counts.interferers);
  const double se = std::sqrt(0.6 * 0.4 /
                              static_cast<double>(r1.counts.interferers));
  CHECK(std::abs(frac - 0.6) < 4.0 * se);
  CHECK(r1.activation_prob == 0.6);
}

TEST_CASE("count bookkeeping stays consistent") {
  NetworkParams p = reference_params();
  p.p_r = 0.5;
  McOptions o;
  o.realizations = 4000;
  o.seed = 402;
  o.workers = 4;
  const McResult r = estimate_op(p, McScheme::Mixed, o);
  const McCounts& c = r.counts;
  CHECK(c.realizations == o.realizations);
  CHECK(c.outages == c.relay_outage + c.direct_fail);
  CHECK(c.relay_outage <= c.relay_decode_fail + c.combined_fail);
  CHECK(c.relay_outage >= c.relay_decode_fail);
  CHECK(c.relay_outage >= c.combined_fail);
  CHECK(c.relay_mode <= c.realizations);
  CHECK(c.relay_outage <= c.relay_mode);
  // Typical activations also follow the coin.
  const double frac = static_cast<double>(c.relay_mode) /
                      static_cast<double>(c.realizations);
  CHECK(std::abs(frac - 0.5) <
        4.0 * std::sqrt(0.25 / static_cast<double>(c.realizations)));
}

TEST_CASE("zero activation collapses the mixed scheme onto direct only") {
  NetworkParams p = reference_params();
  p.p_r = 0.0;
  McOptions o;
  o.realizations = 3000;
  o.seed = 403;
  const McResult mixed = estimate_op(p, McScheme::Mixed, o);
  const McResult direct = estimate_op(p, McScheme::DirectOnly, o);
  CHECK(same_counts(mixed.counts, direct.counts));
  CHECK(mixed.counts.relay_mode == 0);
}

TEST_CASE("direct scheme agrees with the closed outage probability") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 20000;
  o.seed = 404;
  o.workers = 4;
  const McResult r = estimate_op(p, McScheme::DirectOnly, o);
  const double target = op_dt(p);
  // 4 sigma plus a small allowance for window truncation.
  CHECK(std::abs(r.outage_prob - target) < 4.0 * r.std_error + 0.002);
}

TEST_CASE("always-relaying field stays below the closed bound") {
  NetworkParams p = reference_params();
  p.p_r = 1.0;
  McOptions o;
  o.realizations = 20000;
  o.seed = 405;
  o.workers = 4;
  const McResult r = estimate_op(p, McScheme::RelayAlways, o);
  const double bound = op_mix_upper_bound(p, 1.0).value;
  CHECK(r.outage_prob - 4.0 * r.std_error < bound);
  // Relaying should help at the reference point.
  const McResult direct = estimate_op(p, McScheme::DirectOnly, o);
  CHECK(r.outage_prob < direct.outage_prob);
}

TEST_CASE("far-field approximation tracks the exact field") {
  NetworkParams p = reference_params();
  p.p_r = 0.6;
  McOptions o;
  o.realizations = 20000;
  o.seed = 406;
  o.workers = 4;
  const McResult exact = estimate_op(p, McScheme::Mixed, o);
  o.far_field = true;
  const McResult far = estimate_op(p, McScheme::Mixed, o);
  // Same draws, so the gap is the pure approximation error.
  CHECK(exact.counts.realizations == far.counts.realizations);
  CHECK(exact.counts.interferers == far.counts.interferers);
  CHECK(std::abs(exact.outage_prob - far.outage_prob) < 0.005);
}

TEST_CASE("window override changes truncation only mildly") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 20000;
  o.seed = 407;
  o.workers = 4;
  const McResult full = estimate_op(p, McScheme::DirectOnly, o);
  CHECK(full.window_radius == doctest::Approx(400.0));
  o.window_radius = 150.0;
  const McResult small = estimate_op(p, McScheme::DirectOnly, o);
  CHECK(small.window_radius == 150.0);
  const double combined = std::hypot(full.std_error, small.std_error);
  CHECK(std::abs(full.outage_prob - small.outage_prob) <
        5.0 * combined + 0.002);
}

TEST_CASE("threshold extremes reproduce the on-off limits") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 10000;
  o.seed = 408;
  o.workers = 4;
  o.activation = ActivationRule::SourceRelayThreshold;

  // An unreachable threshold silences every relay.
  o.threshold_value = 1e12;
  const McResult off = estimate_op(p, McScheme::Mixed, o);
  CHECK(off.counts.relay_mode == 0);
  CHECK(off.counts.interferer_active == 0);
  NetworkParams p0 = p;
  p0.p_r = 0.0;
  McOptions od = o;
  od.activation = ActivationRule::Bernoulli;
  od.threshold_value = 0.0;
  const McResult direct = estimate_op(p0, McScheme::DirectOnly, od);
  CHECK(std::abs(off.outage_prob - direct.outage_prob) <
        5.0 * std::hypot(off.std_error, direct.std_error) + 1e-9);

  // A vanishing threshold turns every relay on.
  o.threshold_value = 1e-12;
  const McResult on = estimate_op(p, McScheme::Mixed, o);
  CHECK(on.counts.relay_mode == on.counts.realizations);
  CHECK(on.counts.interferer_active == on.counts.interferers);
  NetworkParams p1 = p;
  p1.p_r = 1.0;
  const McResult always = estimate_op(p1, McScheme::RelayAlways, od);
  CHECK(std::abs(on.outage_prob - always.outage_prob) <
        5.0 * std::hypot(on.std_error, always.std_error) + 1e-9);
}

TEST_CASE("marginal firing rule runs and reports its rate") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 4000;
  o.seed = 409;
  o.activation = ActivationRule::RelayDestThreshold;
  o.field_rule = ThresholdFieldRule::MarginalProbability;
  o.threshold_value = 1e-4;
  const McResult a = estimate_op(p, McScheme::Mixed, o);
  CHECK(a.activation_prob > 0.0);
  CHECK(a.activation_prob < 1.0);
  // Interferer activations follow the estimated coin.
  const double frac = static_cast<double>(a.counts.interferer_active) /
                      static_cast<double>(a.counts.interferers);
  const double se =
      std::sqrt(a.activation_prob * (1.0 - a.activation_prob) /
                static_cast<double>(a.counts.interferers));
  CHECK(std::abs(frac - a.activation_prob) < 5.0 * se);
  const McResult b = estimate_op(p, McScheme::Mixed, o);
  CHECK(same_counts(a.counts, b.counts));
}

TEST_CASE("threshold search improves on the grid endpoints") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 3000;
  o.seed = 410;
  o.workers = 4;
  const ThresholdSearchResult s =
      optimize_threshold(p, ActivationRule::SourceRelayThreshold, o);
  CHECK(s.threshold > 0.0);
  CHECK(s.evaluations <= 24);
  CHECK(s.evaluations >= 11);
  // The optimum cannot be worse than the extremes of its own search.
  McOptions probe = o;
  probe.activation = ActivationRule::SourceRelayThreshold;
  const double scale = std::pow(2.0, -0.5 * p.alpha);
  probe.threshold_value = 1e-6 * scale;
  const double lo = estimate_op(p, McScheme::Mixed, probe).outage_prob;
  probe.threshold_value = 1e2 * scale;
  const double hi = estimate_op(p, McScheme::Mixed, probe).outage_prob;
  CHECK(s.outage_prob <= lo);
  CHECK(s.outage_prob <= hi);

  const ThresholdSearchResult again =
      optimize_threshold(p, ActivationRule::SourceRelayThreshold, o);
  CHECK(s.threshold == again.threshold);
  CHECK(s.outage_prob == again.outage_prob);
  CHECK_THROWS_AS(optimize_threshold(p, ActivationRule::Bernoulli, o),
                  ValidationError);
}

TEST_CASE("option validation") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 0;
  CHECK_THROWS_AS(estimate_op(p, McScheme::Mixed, o), ValidationError);
  o.realizations = 10;
  o.workers = 0;
  CHECK_THROWS_AS(estimate_op(p, McScheme::Mixed, o), ValidationError);
  o.workers = 1;
  o.activation = ActivationRule::SourceRelayThreshold;
  o.threshold_value = -1.0;
  CHECK_THROWS_AS(estimate_op(p, McScheme::Mixed, o), ValidationError);
  // A zero threshold is legal: the channel power is positive almost surely,
  // so the rule always fires.
  o.threshold_value = 0.0;
  const McResult always = estimate_op(p, McScheme::Mixed, o);
  CHECK(always.counts.relay_mode == always.counts.realizations);
  CHECK(always.counts.interferer_active == always.counts.interferers);
  o.activation = ActivationRule::Bernoulli;
  NetworkParams bad = p;
  bad.rho = std::complex<double>{0.5, 0.0};
  CHECK_THROWS_AS(estimate_op(bad, McScheme::Mixed, o),
                  UnsupportedCorrelation);
  // Direct transmission tolerates correlated codebooks.
  const McResult ok = estimate_op(bad, McScheme::DirectOnly, o);
  CHECK(ok.counts.realizations == 10);
}

TEST_CASE("curve shares draws with single-point estimates") {
  NetworkParams p = reference_params();
  McOptions o;
  o.realizations = 1500;
  o.seed = 707;
  const auto curve = estimate_op_curve(p, {0.0, 0.35, 1.0},
                                       McScheme::Mixed, o);
  REQUIRE(curve.size() == 3);
  NetworkParams q = p;
  q.p_r = 0.0;
  const McResult lo = estimate_op(q, McScheme::Mixed, o);
  q.p_r = 1.0;
  const McResult hi = estimate_op(q, McScheme::Mixed, o);
  CHECK(curve.front().outage_prob == lo.outage_prob);
  CHECK(same_counts(curve.front().counts, lo.counts));
  CHECK(curve.back().outage_prob == hi.outage_prob);
  CHECK(same_counts(curve.back().counts, hi.counts));
  // Shared field draws: the interferer population is identical across the
  // grid, only activations differ.
  CHECK(curve[1].counts.interferers == curve[0].counts.interferers);
  CHECK_THROWS_AS(estimate_op_curve(p, {}, McScheme::Mixed, o),
                  ValidationError);
  CHECK_THROWS_AS(estimate_op_curve(p, {0.5, 1.2}, McScheme::Mixed, o),
                  ValidationError);
}

TEST_CASE("an empty window leaves the typical link interference free") {
  NetworkParams p = reference_params();
  p.lambda_s = 1e-12;  // the window holds no interferers in practice
  p.p_r = 0.0;
  McOptions o;
  o.realizations = 1;
  o.seed = 5;
  o.window_radius = 400.0;
  const McResult r = estimate_op(p, McScheme::Mixed, o);
  // Without interference the direct SIR is infinite, so no outage.
  CHECK(r.counts.interferers == 0);
  CHECK(r.outage_prob == 0.0);
}

TEST_CASE("default window radius is statistically adequate") {
  NetworkParams p = reference_params();
  p.p_r = 0.5;
  McOptions o;
  o.realizations = 100000;
  o.seed = 11;
  o.workers = 4;
  const McResult base = estimate_op(p, McScheme::Mixed, o);
  McOptions wide = o;
  wide.window_radius = 2.0 * base.window_radius;
  const McResult big = estimate_op(p, McScheme::Mixed, wide);
  // Doubling the truncation radius must not move the estimate beyond its
  // own statistical resolution.
  CHECK(std::abs(big.outage_prob - base.outage_prob) < base.std_error);
}

TEST_SUITE_END();

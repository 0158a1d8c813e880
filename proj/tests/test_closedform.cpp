#include <doctest.h>

#include <cmath>

#include "relaymix/closedform.hpp"
#include "relaymix/errors.hpp"
#include "testutil.hpp"

using namespace relaymix;

namespace {

NetworkParams reference_params() {
  NetworkParams p;
  p.lambda_s = 1e-4;
  p.lambda_in = 1.0 / two_pi;
  p.alpha = 4.0;
  p.rate = 0.5;
  p.dest_distance = 10.0;
  p.phi0 = two_pi;
  return p;
}

NetworkParams with_sigma(double sigma_in) {
  NetworkParams p = reference_params();
  p.lambda_in = lambda_in_of_sigma(sigma_in);
  return p;
}

// Q20 through its defining integral, int_0^inf (u/s)^2 e^{-(u^2+a^2)/2} I0(a u) du
// with unit scale, evaluated with the test-local Simpson and Bessel oracles.
// The integrand lives within ~10 standard widths of u = a.
double oracle_q20(double a) {
  if (a == 0.0) return std::sqrt(pi / 2.0);
  auto f = [a](double u) {
    // e^{-(u^2+a^2)/2} I0(a u) = e^{-(u-a)^2/2} * i0e(a u)
    const double inner = testutil::adaptive_simpson(
        [x = a * u](double t) { return std::exp(x * (std::cos(t) - 1.0)); },
        0.0, pi, 1e-13, 34);
    return u * u * std::exp(-0.5 * (u - a) * (u - a)) * inner / pi;
  };
  const double lo = std::max(0.0, a - 11.0);
  return testutil::adaptive_simpson(f, lo, a + 11.0, 1e-10, 30);
}

}  // namespace

TEST_SUITE("closedform") {

TEST_CASE("direct transmission outage at the reference point") {
  CHECK(op_dt(reference_params()) ==
        doctest::Approx(0.031261048569866683).epsilon(1e-13));
  NetworkParams p = reference_params();
  p.rate = 1e-12;
  // The threshold scales as rate^(2/alpha), so outage decays like sqrt(rate).
  CHECK(op_dt(p) < 1e-7);
  CHECK(op_dt(p) > 0.0);
  p.rate = 0.5;
  NetworkParams hi = p;
  hi.rate = 1.0;
  CHECK(op_dt(hi) > op_dt(p));
}

TEST_CASE("mixed bound reduces to direct transmission at p_r = 0") {
  const auto b = op_mix_upper_bound(reference_params(), 0.0);
  CHECK_FALSE(b.clamped);
  CHECK(b.value ==
        doctest::Approx(op_dt(reference_params())).epsilon(1e-15));
}

TEST_CASE("mixed bound frozen values at sigma_in = 1") {
  CHECK(op_mix_upper_bound(reference_params(), 1.0).value ==
        doctest::Approx(0.024877022715439187).epsilon(1e-12));
  CHECK(op_mix_upper_bound(reference_params(), 0.5).value ==
        doctest::Approx(0.029828179803268197).epsilon(1e-12));
}

TEST_CASE("mixed bound vanishes with the rate and clamps when overdriven") {
  NetworkParams p = reference_params();
  p.rate = 1e-9;
  for (double pr : {0.0, 0.3, 1.0})
    CHECK(op_mix_upper_bound(p, pr).value < 1e-5);
  NetworkParams heavy = reference_params();
  heavy.lambda_s = 10.0;
  heavy.lambda_in = 100.0;
  const auto b = op_mix_upper_bound(heavy, 1.0);
  CHECK(b.clamped);
  CHECK(b.value == 1.0);
  CHECK_THROWS_AS(op_mix_upper_bound(reference_params(), 1.5),
                  ValidationError);
}

TEST_CASE("mixed bound grows with the rate") {
  NetworkParams p = reference_params();
  double prev = 0.0;
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    p.rate = r;
    const double v = op_mix_upper_bound(p, 1.0).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("nuttall factor against its integral definition") {
  CHECK(nuttall_q20(0.0) ==
        doctest::Approx(1.2533141373155003).epsilon(1e-13));
  const double table[][2] = {
      {0.1, 1.2564454659860949}, {0.5, 1.3304473406107032},
      {1.0, 1.5485724605511454}, {2.0, 2.2723834280687425},
      {5.0, 5.1010696394921249}, {10.0, 10.050126936677421},
      {50.0, 50.010001000600751}};
  for (const auto& row : table)
    CHECK(nuttall_q20(row[0]) == doctest::Approx(row[1]).epsilon(1e-12));
  for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
    CHECK(nuttall_q20(s) == doctest::Approx(oracle_q20(s)).epsilon(1e-8));
  CHECK_THROWS_AS(nuttall_q20(-0.1), ValidationError);
}

TEST_CASE("expected relay-destination distance") {
  // At full aperture the quadrature must reproduce the closed form; this
  // exercises the kink handling with sigma_k on both sides of the distance.
  for (double sigma : {0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 30.0}) {
    const double closed = expected_relay_dest_distance(sigma, two_pi, 10.0);
    const double quadv =
        expected_relay_dest_distance_quadrature(sigma, two_pi, 10.0, 1e-5);
    CHECK(closed == doctest::Approx(quadv).epsilon(1e-11));
  }
  CHECK(expected_relay_dest_distance(1.0, two_pi, 10.0) ==
        doctest::Approx(10.050126936677421).epsilon(1e-12));
  // Frozen cone values from an independent integrator.
  CHECK(expected_relay_dest_distance(1.0, pi, 10.0) ==
        doctest::Approx(8.9833745819942266).epsilon(5e-7));
  CHECK(expected_relay_dest_distance(0.8, pi / 2.0, 10.0) ==
        doctest::Approx(8.256443130746538).epsilon(5e-7));
  CHECK(expected_relay_dest_distance(2.0, pi, 10.0) ==
        doctest::Approx(8.2425380066697667).epsilon(5e-7));
  CHECK(expected_relay_dest_distance(0.5, 0.3, 10.0) ==
        doctest::Approx(7.1505149963412773).epsilon(5e-7));
  // Zero separation collapses to the mean offset radius.
  const double sk = std::sqrt(two_pi / pi) * 1.3;
  CHECK(expected_relay_dest_distance(1.3, pi, 0.0) ==
        doctest::Approx(sk * std::sqrt(pi / 2.0)).epsilon(1e-14));
  // Tiny scatter pins the relay at the source.
  CHECK(expected_relay_dest_distance(1e-3, two_pi, 10.0) ==
        doctest::Approx(10.0).epsilon(1e-6));
  CHECK_THROWS_AS(expected_relay_dest_distance(-1.0, pi, 10.0),
                  ValidationError);
  CHECK_THROWS_AS(expected_relay_dest_distance(1.0, 7.0, 10.0),
                  ValidationError);
}

TEST_CASE("gamma factor values and limits") {
  CHECK(gamma_factor(0.5, two_pi) ==
        doctest::Approx(0.38389931612529375).epsilon(1e-13));
  CHECK(gamma_factor(1.0 / std::sqrt(2.0), two_pi) ==
        doctest::Approx(0.48573240679559972).epsilon(1e-13));
  CHECK(gamma_factor(1e8, pi) ==
        doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-6));
  CHECK(gamma_factor(0.1, 0.1) < 0.0);  // narrow cones may go negative
}

TEST_CASE("distance bound dominates the exact expectation") {
  for (double ratio : {0.01, 0.05, 0.1, 0.2, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0})
    for (double frac : {0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.95, 0.99,
                        1.0}) {
      const double phi0 = two_pi * frac;
      const double sigma = ratio * 10.0;
      const double exact = expected_relay_dest_distance(sigma, phi0, 10.0);
      const double bound = expected_distance_bound(sigma, phi0, 10.0);
      CHECK(exact <= bound * (1.0 + 1e-9));
    }
}

TEST_CASE("concavity scatter limit") {
  const auto sc = sigma_c(reference_params());
  CHECK(sc.closed_bound ==
        doctest::Approx(4.4295645770575725).epsilon(1e-12));
  CHECK(sc.root > sc.closed_bound);
  // The residual really crosses zero at the root.
  const double d = 10.0, alpha = 4.0;
  auto residual = [&](double sigma) {
    return 4.0 * pi * alpha * sigma * sigma / (two_pi * d * d) +
           (alpha - 2.0) * expected_relay_dest_distance(sigma, two_pi, d) /
               d -
           alpha;
  };
  CHECK(std::abs(residual(sc.root)) < 1e-4);
  CHECK(residual(0.99 * sc.root) < 0.0);
  CHECK(residual(1.01 * sc.root) > 0.0);

  NetworkParams dense = reference_params();
  dense.lambda_s = 2e-3;  // hypothesis scalar 0.635 > (3-sqrt5)/2
  CHECK_THROWS_AS(sigma_c(dense), HypothesisViolated);
}

TEST_CASE("activation scatter threshold") {
  const auto st = sigma_t(reference_params());
  CHECK(st.closed_bound ==
        doctest::Approx(2.4464909258014011).epsilon(1e-12));
  CHECK(st.root > st.closed_bound);
  const double d = 10.0, alpha = 4.0;
  auto residual = [&](double sigma) {
    return (1.0 + 2.0 / alpha) *
               (4.0 * pi * sigma * sigma / (two_pi * d * d) +
                (1.0 - 2.0 / alpha) *
                    expected_relay_dest_distance(sigma, two_pi, d) / d) -
           1.0;
  };
  CHECK(std::abs(residual(st.root)) < 1e-5);
  // Concavity holds beyond the activation threshold.
  CHECK(st.root < sigma_c(reference_params()).root);
}

TEST_CASE("gain ratio limits and threshold consistency") {
  // sigma -> 0 limit is 1 - 4/alpha^2.
  CHECK(op_gain_ratio(with_sigma(1e-3)) ==
        doctest::Approx(0.75).epsilon(1e-6));
  const auto st = sigma_t(reference_params());
  CHECK(op_gain_ratio(with_sigma(0.999 * st.root)) < 1.0);
  CHECK(op_gain_ratio(with_sigma(1.001 * st.root)) == 1.0);
  CHECK(op_gain_ratio(with_sigma(0.9999999 * st.root)) ==
        doctest::Approx(1.0).epsilon(1e-5));

  const auto analysis = activation_decision(with_sigma(0.5 * st.root));
  CHECK(analysis.decided_p_r == 1);
  CHECK(analysis.gain_ratio < 1.0);
  CHECK(activation_decision(with_sigma(2.0 * st.root)).decided_p_r == 0);
}

TEST_CASE("gain ratio tracks the bound's preference at the endpoints") {
  // Wherever the ratio says relays help (ratio < 1), the full bound at
  // p_r = 1 should undercut direct transmission, and vice versa well away
  // from the threshold.
  const auto st = sigma_t(reference_params());
  NetworkParams below = with_sigma(0.5 * st.root);
  CHECK(op_mix_upper_bound(below, 1.0).value < op_dt(below));
  NetworkParams above = with_sigma(2.0 * st.root);
  CHECK(op_mix_upper_bound(above, 1.0).value > op_dt(above));
}

TEST_CASE("aperture optimization") {
  // Wide scatter: full aperture is optimal.
  NetworkParams wide = with_sigma(2.5);  // sigma/D = 0.25
  wide.alpha = 3.0;
  const auto full = optimize_phi0(wide);
  CHECK(full.phi0_star == doctest::Approx(two_pi).epsilon(1e-9));
  CHECK(full.ratio_at_star < 1.0);

  // Tight scatter at alpha = 3: a strict cone wins.
  NetworkParams tight = with_sigma(1.0);  // sigma/D = 0.1
  tight.alpha = 3.0;
  const auto cone = optimize_phi0(tight);
  CHECK(cone.phi0_star < two_pi * 0.5);
  CHECK(cone.phi0_star > two_pi * 0.25);
  // Independent scan put the optimum near 0.375 * 2pi with ratio ~0.5617.
  CHECK(cone.phi0_star == doctest::Approx(0.375 * two_pi).epsilon(0.04));
  CHECK(cone.ratio_at_star == doctest::Approx(0.5617).epsilon(5e-3));
  // Refined optimum beats the full aperture.
  NetworkParams tight_full = tight;
  const double at_full = op_gain_ratio(tight_full);
  CHECK(cone.ratio_at_star < at_full - 0.02);

  // Very tight scatter at alpha = 4: narrow cone, large gain.
  NetworkParams pin = with_sigma(0.2);  // sigma/D = 0.02
  const auto narrow = optimize_phi0(pin);
  CHECK(narrow.phi0_star < 0.2 * two_pi);
  CHECK(narrow.ratio_at_star < op_gain_ratio(pin) - 0.02);

  CHECK_THROWS_AS(optimize_phi0(reference_params(), 2), ValidationError);
}

TEST_CASE("max rate inversion") {
  // Direct scheme against the closed-form inverse.
  const double r_dt =
      max_rate_for_op(reference_params(), 0.03, RateScheme::Dt);
  CHECK(r_dt == doctest::Approx(0.46568832182189193).epsilon(3e-4));
  // Returned rate actually meets the target.
  NetworkParams q = reference_params();
  q.rate = r_dt;
  CHECK(op_dt(q) == doctest::Approx(0.03).epsilon(1e-3));

  // Mixed scheme can only do better, and strictly so at small scatter.
  const double r_mix =
      max_rate_for_op(reference_params(), 0.03, RateScheme::Mix);
  CHECK(r_mix >= r_dt - 1e-4);
  const double r_mix_tight =
      max_rate_for_op(with_sigma(0.3), 0.03, RateScheme::Mix);
  CHECK(r_mix_tight > r_dt + 0.05);

  CHECK_THROWS_AS(
      max_rate_for_op(reference_params(), 0.0, RateScheme::Dt),
      ValidationError);
  CHECK_THROWS_AS(
      max_rate_for_op(reference_params(), 1e-300, RateScheme::Dt),
      TargetUnreachable);
  // With vanishing density no rate below the 64 bits/use cap gets near the
  // target, which trips the range guard.
  NetworkParams sparse = reference_params();
  sparse.lambda_s = 1e-30;
  CHECK_THROWS_AS(max_rate_for_op(sparse, 0.5, RateScheme::Dt),
                  MaxIterations);
}

}  // TEST_SUITE

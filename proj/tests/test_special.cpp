#include <doctest.h>

#include <cmath>

#include "relaymix/quadrature.hpp"
#include "relaymix/special_functions.hpp"
#include "testutil.hpp"

using namespace relaymix;

TEST_SUITE("special") {

TEST_CASE("scaled bessel values against the integral definition") {
  for (double x : {1e-8, 0.1, 1.0, 5.0, 25.0, 80.0, 99.9, 100.1, 300.0,
                   2000.0}) {
    CHECK(bessel_i0e(x) ==
          doctest::Approx(testutil::oracle_i0e(x)).epsilon(1e-12));
    CHECK(bessel_i1e(x) ==
          doctest::Approx(testutil::oracle_i1e(x)).epsilon(1e-12));
  }
  CHECK(bessel_i0e(0.0) == 1.0);
  CHECK(bessel_i1e(0.0) == 0.0);
}

TEST_CASE("series and asymptotic branches agree at the switch") {
  CHECK(bessel_i0e(100.0 - 1e-9) ==
        doctest::Approx(bessel_i0e(100.0 + 1e-9)).epsilon(1e-12));
  CHECK(bessel_i1e(100.0 - 1e-9) ==
        doctest::Approx(bessel_i1e(100.0 + 1e-9)).epsilon(1e-12));
  // A moved switch changes the branch taken, not the value.
  SpecialFunctionConfig low{50.0};
  CHECK(bessel_i0e(60.0, low) ==
        doctest::Approx(testutil::oracle_i0e(60.0)).epsilon(1e-12));
  CHECK(bessel_i1e(60.0, low) ==
        doctest::Approx(testutil::oracle_i1e(60.0)).epsilon(1e-12));
}

TEST_CASE("gauss rules integrate polynomials to machine accuracy") {
  const auto& rule = quad::gauss_rule(16);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
  // Exact for degree <= 31: check x^30 and x^31 on [0, 1].
  auto p30 = [](double x) { return std::pow(x, 30); };
  auto p31 = [](double x) { return std::pow(x, 31); };
  CHECK(quad::gauss_panel(p30, 0.0, 1.0, rule) ==
        doctest::Approx(1.0 / 31.0).epsilon(1e-14));
  CHECK(quad::gauss_panel(p31, 0.0, 1.0, rule) ==
        doctest::Approx(1.0 / 32.0).epsilon(1e-14));
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[15 - i]).epsilon(1e-15));
}

TEST_CASE("composite panels and refinement") {
  const auto& rule = quad::gauss_rule(16);
  auto f = [](double x) { return std::exp(x); };
  const std::vector<double> edges{0.0, 0.3, 1.0};
  const double v1 = quad::composite(f, edges, rule);
  const double v2 = quad::composite(f, quad::split_edges(edges), rule);
  const double exact = std::exp(1.0) - 1.0;
  CHECK(v1 == doctest::Approx(exact).epsilon(1e-14));
  CHECK(v2 == doctest::Approx(exact).epsilon(1e-14));
  CHECK(quad::split_edges(edges).size() == 5);
}

}  // TEST_SUITE

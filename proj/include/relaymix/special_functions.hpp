#pragma once

namespace relaymix {

// Controls where the scaled Bessel evaluations switch from the power series
// to the large-argument asymptotic series.
struct SpecialFunctionConfig {
  double series_asymptotic_switch = 100.0;
};

// Exponentially scaled modified Bessel functions e^{-|x|} I0(x), e^{-|x|} I1(x).
// Accurate to better than 1e-12 relative over x >= 0.
double bessel_i0e(double x, const SpecialFunctionConfig& cfg = {});
double bessel_i1e(double x, const SpecialFunctionConfig& cfg = {});

}  // namespace relaymix

#include "relaymix/special_functions.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

namespace relaymix {
namespace {

// Power series of I_nu with all-positive terms, scaled by e^{-x} at the end.
// For x <= ~700 the unscaled sum stays inside double range.
double series_i(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = nu == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum * std::exp(-x);
}

// Asymptotic expansion I_nu(x) ~ e^x/sqrt(2 pi x) * sum_k t_k with
// t_0 = 1, t_k = -t_{k-1} (mu - (2k-1)^2) / (8 x k), mu = 4 nu^2.
double asymptotic_i(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * x * k);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum / std::sqrt(2.0 * 3.141592653589793238462643383279502884 * x);
}

double scaled_i(int nu, double x, const SpecialFunctionConfig& cfg) {
  const double ax = std::abs(x);
  const double val = ax <= cfg.series_asymptotic_switch ? series_i(nu, ax)
                                                        : asymptotic_i(nu, ax);
  return nu == 1 && x < 0.0 ? -val : val;
}

}  // namespace

double bessel_i0e(double x, const SpecialFunctionConfig& cfg) {
  return scaled_i(0, x, cfg);
}

double bessel_i1e(double x, const SpecialFunctionConfig& cfg) {
  return scaled_i(1, x, cfg);
}

}  // namespace relaymix

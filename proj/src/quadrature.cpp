#include "relaymix/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace relaymix {
namespace quad {
namespace {

GaussRule make_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.141592653589793238462643383279502884;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x).
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

std::vector<double> split_edges(const std::vector<double>& edges) {
  std::vector<double> out;
  out.reserve(edges.size() * 2 - 1);
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    out.push_back(edges[j]);
    out.push_back(0.5 * (edges[j] + edges[j + 1]));
  }
  out.push_back(edges.back());
  return out;
}

}  // namespace quad
}  // namespace relaymix

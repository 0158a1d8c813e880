#pragma once

#include <cstddef>
#include <vector>

namespace relaymix {
namespace quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n, computed once per n by Newton iteration on
// the Legendre recurrence (machine-accurate, no hardcoded tables).
const GaussRule& gauss_rule(std::size_t n);

template <class F>
double gauss_panel(F&& f, double a, double b, const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

template <class F>
double composite(F&& f, const std::vector<double>& edges,
                 const GaussRule& rule) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j)
    sum += gauss_panel(f, edges[j], edges[j + 1], rule);
  return sum;
}

// Each panel split in two; used for refinement self-checks.
std::vector<double> split_edges(const std::vector<double>& edges);

}  // namespace quad
}  // namespace relaymix

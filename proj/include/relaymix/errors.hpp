#pragma once

#include <stdexcept>
#include <string>

namespace relaymix {

// Base class for all library exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter set rejected; message lists every violation.
struct ValidationError : Error {
  using Error::Error;
};

// Path loss requested between two identical points.
struct CoincidentPoints : Error {
  using Error::Error;
};

// Operation requires uncorrelated source/relay codebooks (rho = 0).
struct UnsupportedCorrelation : Error {
  using Error::Error;
};

// Deterministic quadrature failed its refinement check.
struct QuadratureNonConvergence : Error {
  using Error::Error;
};

// Closed-form guarantee requested outside its hypothesis region.
struct HypothesisViolated : Error {
  using Error::Error;
};

// Root finder saw no sign change over the scanned interval.
struct RootNotBracketed : Error {
  using Error::Error;
};

// Sampling integrator ran out of budget before reaching its error target.
struct IntegrationBudgetExceeded : Error {
  IntegrationBudgetExceeded(const std::string& msg, double achieved)
      : Error(msg), achieved_rel_error(achieved) {}
  double achieved_rel_error;
};

// Requested operating point cannot be met anywhere in the search range.
struct TargetUnreachable : Error {
  using Error::Error;
};

// Iterative search hit its iteration or range cap.
struct MaxIterations : Error {
  using Error::Error;
};

// Figure id not recognized.
struct UnknownFigure : Error {
  using Error::Error;
};

// Config or sweep text could not be parsed.
struct ConfigParseError : Error {
  using Error::Error;
};

}  // namespace relaymix

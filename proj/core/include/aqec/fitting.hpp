#pragma once

#include <vector>

namespace aqec {

/// Result of fitting F(t) = A exp(-t / tau) + offset with the offset held
/// fixed (0.25 for process-fidelity decay curves).
struct DecayFit {
  double amplitude = 0.0;
  double tau = 0.0;
  double offset = 0.25;
  double amplitude_sigma = 0.0;
  double tau_sigma = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Nonlinear least squares with analytic Jacobian; initial guess from
/// log-linearization. Requires >= 4 points with strictly increasing t.
/// Throws on non-convergence or a negative fitted amplitude.
DecayFit fit_exponential(const std::vector<std::pair<double, double>>& points,
                         double fixed_offset = 0.25);

/// Least-squares fit of P(phi) = A cos(phi + phase) + B with the period
/// fixed; linear in (A cos, A sin, B) so the fit is convex.
struct FringeFit {
  double amplitude = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  double amplitude_sigma = 0.0;
  double offset_sigma = 0.0;
};
FringeFit fit_fringe(const std::vector<double>& phi, const std::vector<double>& p);

}  // namespace aqec

#pragma once

#include "aqec/math.hpp"

#include <vector>

namespace aqec {

struct WignerGridSpec {
  double x_min = -3.5, x_max = 3.5;
  double p_min = -3.5, p_max = 3.5;
  int nx = 81, np = 81;
};

struct WignerGrid {
  WignerGridSpec spec;
  std::vector<double> values;  // row-major, values[ip * nx + ix]

  double at(int ix, int ip) const { return values[ip * spec.nx + ix]; }
  double x_of(int ix) const;
  double p_of(int ip) const;
  /// Trapezoidal integral of W over the grid (should be ~1 for contained states).
  double integral() const;
};

/// Displaced-parity Wigner function of a cavity-only density matrix,
/// normalized so that integral of W dx dp = 1:
///   W(x, p) = (1/pi) Tr[rho D(alpha) P D(alpha)^†],  alpha = (x + i p)/sqrt(2).
/// Throws if the state leaks into the top two Fock levels (population > 1e-3).
WignerGrid wigner(const Matrix& cavity_rho, const WignerGridSpec& grid);

/// Displacement operator on a d-dimensional truncated Fock space.
Matrix displacement_operator(int dim, cplx alpha);

}  // namespace aqec

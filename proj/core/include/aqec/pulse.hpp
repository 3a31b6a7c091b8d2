#pragma once

#include "aqec/math.hpp"

#include <functional>
#include <string>
#include <vector>

namespace aqec {

enum class PulseForm { Piecewise, Fourier };

/// Per-frequency amplitude scaling applied when synthesizing samples from
/// Fourier coefficients; stands in for the hardware calibration chain.
using TransferFunction = std::function<double(double f_mhz)>;

inline TransferFunction identity_transfer() {
  return [](double) { return 1.0; };
}

/// Time-sampled complex control envelopes for the qubit and cavity drives.
/// Channel order is fixed: {qubit I, qubit Q, cavity I, cavity Q}; amplitudes
/// are ordinary frequencies in MHz.
struct PulseSchedule {
  double dt_ns = 2.0;
  std::array<std::vector<double>, 4> channels;
  PulseForm form = PulseForm::Piecewise;

  // Fourier parameterization metadata (form == Fourier): per channel
  // coefficients [a0, a1, b1, ..., aM, bM] with components f_k = k * delta_f.
  double delta_f_mhz = 0.0;
  int modes = 0;
  std::array<RealVector, 4> coefficients;

  double amplitude_cap_mhz = 50.0;

  int steps() const { return static_cast<int>(channels[0].size()); }
  double duration_ns() const { return dt_ns * steps(); }
  double max_amplitude() const;

  /// Sample value of a Fourier channel at time t_ns (midpoint convention).
  static double fourier_value(const RealVector& coeffs, double delta_f_mhz, double t_ns,
                              const TransferFunction& transfer);

  /// Synthesizes the sample arrays from the stored Fourier coefficients.
  void synthesize(const TransferFunction& transfer = identity_transfer());

  /// Least-squares projection of the current samples onto the Fourier basis.
  static RealVector project_fourier(const std::vector<double>& samples, double dt_ns,
                                    double delta_f_mhz, int modes);

  std::string to_json() const;
  static PulseSchedule from_json(const std::string& text);
};

/// State-transfer target: orthonormal inputs mapped to orthonormal outputs
/// on the cavity (x) qubit space.
struct TransferTarget {
  int cavity_dim = 0;
  std::vector<Vector> inputs;   // full-space vectors (cavity x qubit)
  std::vector<Vector> outputs;

  void validate(double tol = 1e-9) const;
};

}  // namespace aqec

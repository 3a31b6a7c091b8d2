#pragma once

#include "aqec/codes.hpp"
#include "aqec/device.hpp"
#include "aqec/hilbert.hpp"
#include "aqec/pulse.hpp"
#include "aqec/reset.hpp"

#include <optional>

namespace aqec {

struct GrapeOptions {
  double duration_ns = 2100.0;
  double dt_ns = 2.0;
  PulseForm form = PulseForm::Fourier;
  double delta_f_mhz = 0.0;      // 0 = 1/duration
  int modes = 0;                 // 0 = fill the band up to band_limit_mhz
  double band_limit_mhz = 50.0;  // M * delta_f stays at or below this
  double amplitude_cap_mhz = 30.0;
  double cap_penalty_weight = 10.0;
  int max_iterations = 600;
  double target_infidelity = 5e-4;
  std::uint64_t seed = 20240901;
  double init_amplitude_mhz = 1.0;
  TransferFunction transfer = identity_transfer();
};

struct GrapeReport {
  std::vector<double> fidelity_per_iteration;
  double final_fidelity = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// State-transfer fidelity |sum_i <out_i|U|in_i>|^2 / N^2 of a schedule
/// propagated under the closed-system dispersive Hamiltonian plus controls.
double grape_fidelity(const PulseSchedule& schedule, const TransferTarget& target,
                      const DeviceParams& device);

/// Exact gradient of the fidelity with respect to the piecewise-constant
/// samples (4 channels x steps), via the eigenbasis directional derivative
/// of each step propagator.
std::array<std::vector<double>, 4> grape_gradient(const PulseSchedule& schedule,
                                                  const TransferTarget& target,
                                                  const DeviceParams& device);

/// Quasi-Newton pulse optimization; deterministic for a fixed seed.
PulseSchedule grape_optimize(const TransferTarget& target, const DeviceParams& device,
                             const GrapeOptions& opts, GrapeReport* report = nullptr);

/// Total propagator of the schedule (closed system).
Matrix schedule_propagator(const PulseSchedule& schedule, const TransferTarget& target,
                           const DeviceParams& device);

/// Recovery-map targets: distorted code basis (no-jump angle theta plus
/// optional deterministic idle phases) returns to the code space with the
/// ancilla left in |g>, and the error basis returns with the ancilla flipped
/// to |e>; outputs carry the reset-phase pre-compensation.
TransferTarget make_aqec_target(const CodeSpec& code, double theta,
                                const ResetPhaseTable& phase_table,
                                const RealVector& idle_phases = RealVector());

/// Encode target: ancilla {|g>, |e>} with the cavity in vacuum maps onto the
/// logical codewords with the ancilla returned to |g>.
TransferTarget make_encode_target(const CodeSpec& code);

/// Unitary completion of a transfer target (deterministic Gram-Schmidt).
Matrix ideal_recovery_unitary(const TransferTarget& target);

}  // namespace aqec

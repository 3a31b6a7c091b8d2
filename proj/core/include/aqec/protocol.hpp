#pragma once

#include "aqec/codes.hpp"
#include "aqec/device.hpp"
#include "aqec/dynamics.hpp"
#include "aqec/fitting.hpp"
#include "aqec/grape.hpp"
#include "aqec/pulse.hpp"
#include "aqec/reset.hpp"

#include <map>
#include <optional>
#include <string>

namespace aqec {

enum class ExecutionTier { Ideal, Pulse };

/// Photon-number-resolved a.c. Stark drive cancelling Kerr-induced dephasing.
struct PassDrive {
  double detuning_chi_units = -3.5;  // drive detuning in units of chi_qc
  double amplitude_mhz = 0.0;        // Omega_d / 2pi
};

/// Per-Fock phase accumulation rates f_n (ordinary MHz, relative to n = 0)
/// under self-Kerr, second-order cross-Kerr and the PASS drive, from the
/// exact two-level dressed energies.
RealVector pass_phase_rates(const DeviceParams& device, int dim,
                            const std::optional<PassDrive>& drive);

struct PassTuning {
  double detuning_chi_units = 0.0;
  double amplitude_mhz = 0.0;
  RealVector rates_mhz;
  std::vector<double> condition_residuals_mhz;  // per error-transparent condition
  std::vector<double> condition_scales_mhz;     // reference magnitudes
};

/// Sweeps the drive amplitude and returns the point minimizing the code's
/// error-transparent residuals (one condition for the binomial family, two
/// for the sqrt17 code). Throws when no zero crossing exists in range.
PassTuning tune_pass(const CodeSpec& code, const DeviceParams& device,
                     double detuning_chi_units, double max_amplitude_mhz = 0.3);

/// Noise switches for the idle segment; zeroed pieces isolate budget rows.
struct IdleConfig {
  double tphi_c_eff_us = 0.0;  // 0 = device value
  bool cavity_loss = true;
  bool cavity_thermal = true;
  bool cavity_dephasing = true;
  bool qubit_noise = true;
  bool kerr = true;
  std::optional<PassDrive> pass;
  /// Extra uniform cavity-coherence decay standing in for residual
  /// Kerr/PASS imperfections, expressed per cycle of the given duration.
  double residual_dephasing_per_cycle = 0.0;
  double cycle_for_residual_us = 152.81;
  /// Sensing detuning imprinted physically (validation of the virtual-phase
  /// route); excluded from decode-time phase unwinding.
  double cavity_detuning_mhz = 0.0;
};

LindbladModel idle_model(const HilbertSpec& spec, const DeviceParams& device,
                         const IdleConfig& config);

struct CycleSpec {
  double t_wait_us = 150.0;
  double recovery_ns = 2100.0;
  double reset_ns = 710.0;
  ExecutionTier tier = ExecutionTier::Ideal;
  IdleConfig idle;
  ResetPhaseTable phases = ResetPhaseTable::zero();
  bool reset_error_bound = true;       // apply the measured e-branch loss
  double gate_error_rate = 0.0;        // ideal-tier per-cycle surrogate
  std::optional<PulseSchedule> recovery_pulse;  // pulse tier

  double total_cycle_us() const {
    return t_wait_us + (recovery_ns + reset_ns) * 1e-3;
  }
};

/// Precomputed single-cycle machinery for one encoding.
class CycleEngine {
 public:
  CycleEngine(const CodeSpec& code, const CycleSpec& cycle, const DeviceParams& device);

  DensityOperator run_cycle(const DensityOperator& rho) const;
  /// Idle-only segment of the same duration (for uncorrected baselines).
  DensityOperator idle_only(const DensityOperator& rho, double duration_us) const;

  DensityOperator encode(const Matrix& rho_logical) const;
  Matrix decode(const DensityOperator& rho, double unwind_time_us = 0.0) const;

  const HilbertSpec& spec() const { return spec_; }
  /// Deterministic qubit-ground diagonal energies (rad/us per Fock level)
  /// used for decode-time unwinding of idle phases.
  const RealVector& idle_diagonal_energies() const { return unwind_phases_; }
  const Matrix& recovery_unitary() const { return recovery_; }
  const CycleSpec& cycle() const { return cycle_; }

 private:
  CodeSpec code_;
  CycleSpec cycle_;
  DeviceParams device_;
  HilbertSpec spec_;
  Matrix encode_isometry_;   // dim x 2
  Matrix recovery_;          // ideal recovery unitary
  Channel idle_channel_;     // exp(L * idle exposure)
  mutable std::map<long long, Channel> idle_cache_;  // keyed by ns duration
  Channel cycle_channel_;    // reset ∘ gate-error ∘ recovery ∘ idle
  RealVector unwind_phases_; // deterministic diagonal phases per us (g block)
  LindbladModel idle_model_;
  std::vector<Matrix> logical_paulis_;

  friend class BudgetProbe;
};

struct LifetimeOptions {
  int cycles = 14;
  bool corrected = true;  // false: idle-only with matched sampling
};

struct LifetimeResult {
  std::string encoding;
  std::vector<double> t_us;
  std::vector<double> f_chi;
  DecayFit fit;
  double tau_ms() const { return fit.tau * 1e-3; }
  double tau_sigma_ms() const { return fit.tau_sigma * 1e-3; }
};

LifetimeResult lifetime_experiment(const CodeSpec& code, const CycleSpec& cycle,
                                   const DeviceParams& device, const LifetimeOptions& opts);

/// Default cycle configuration for an encoding: tuned PASS drive, effective
/// dephasing times and the per-cycle gate-error surrogate.
CycleSpec default_cycle(const CodeSpec& code, const DeviceParams& device,
                        ExecutionTier tier = ExecutionTier::Ideal);

struct ErrorBudgetRow {
  std::string name;
  double value = 0.0;  // normalized process infidelity fraction
};

struct ErrorBudget {
  std::vector<ErrorBudgetRow> rows;
  double total = 0.0;
  /// Directly simulated single-cycle normalized infidelity, when computed.
  std::optional<double> direct_epsilon;
  double row(const std::string& name) const;
};

/// Itemized single-cycle error budget. When a recovery pulse is supplied the
/// gate row is evaluated as the pulse-level vs ideal-unitary delta and the
/// direct single-cycle epsilon is filled in.
ErrorBudget error_budget(const CodeSpec& code, const CycleSpec& cycle,
                         const DeviceParams& device,
                         const std::optional<PulseSchedule>& recovery_pulse);

/// Normalized process infidelity 1 - (F_chi - 0.25) / 0.75 of one cycle.
double single_cycle_epsilon(const CodeSpec& code, const CycleSpec& cycle,
                            const DeviceParams& device);

/// Hierarchical recovery map of the generalized binomial code: k-photon-loss
/// subspaces step down toward the code space (ancilla flipped per step),
/// gain and dephasing subspaces step down stopping at their first level, and
/// the distorted code returns in place.
TransferTarget cascaded_target(int losses, int gains, int dephasings,
                               double theta = 0.78539816339744830962,
                               const ResetPhaseTable& phases = ResetPhaseTable::zero());

}  // namespace aqec

#pragma once

#include "aqec/device.hpp"
#include "aqec/hilbert.hpp"

namespace aqec {

enum class FrameChoice {
  /// Two-level qubit, bare mode frequencies dropped: cross-Kerr and Kerr
  /// terms only. The workhorse frame for idle and control simulations.
  DispersiveTwoLevel,
  /// All terms including bare frequencies and qubit self-Kerr; requires
  /// the mode frequencies to be set.
  FullLab,
};

/// System Hamiltonian in angular units (rad/us) on the given space.
/// Sign conventions: -K_c/2 a^†2 a^2, -chi_qc n_q n_c, -chi_qr n_q n_r,
/// +chi'_qc/2 n_q a^†2 a^2.
FockOperator system_hamiltonian(const DeviceParams& params, const HilbertSpec& spec,
                                FrameChoice frame);

/// Per-Fock cavity phase rates (angular, rad/us) of the idle Hamiltonian
/// with the qubit in |g>: the amplitude of |n> evolves as exp(-i E_n t) and
/// this returns E_n for n = 0..cavity_dim-1 (Kerr only in the dispersive
/// frame; callers add PASS shifts on top).
RealVector cavity_diagonal_energies(const DeviceParams& params, int cavity_dim);

}  // namespace aqec

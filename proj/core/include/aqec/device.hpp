#pragma once

#include <optional>
#include <string>

namespace aqec {

/// Hamiltonian constants and coherence times of the device. All frequencies
/// are stored as ordinary frequencies in MHz and times in microseconds; the
/// single conversion to angular units happens where Hamiltonians are built.
struct DeviceParams {
  // Mode frequencies (optional; only needed for the full lab frame).
  std::optional<double> omega_c_mhz;
  std::optional<double> omega_q_mhz;
  std::optional<double> omega_r_mhz;

  // Self-Kerr and cross-Kerr couplings, MHz.
  double kerr_c_mhz = 1.0e-3;
  double kerr_q_mhz = 221.0;
  double chi_qc_mhz = 0.88;
  double chi_qr_mhz = 3.0;
  double chi2_qc_mhz = 0.97e-3;  // second-order cross-Kerr

  // Coherence, microseconds.
  double t1_c_us = 1400.0;
  double tphi_c_us = 6500.0;
  double t1_q_us = 133.0;
  double tphi_q_us = 388.0;
  double t1_r_us = 0.113;

  // Thermal populations, dimensionless.
  double n_th_c = 0.002;
  double n_th_q = 0.012;

  double kappa_r() const { return 1.0 / t1_r_us; }           // 1/us (energy decay)
  double kappa_r_mhz() const;                                 // kappa_r / 2pi
  double kappa_c() const { return 1.0 / t1_c_us; }

  void validate() const;
};

/// The measured device the simulations reproduce by default.
DeviceParams device_table_defaults();

}  // namespace aqec

#pragma once

#include "aqec/codes.hpp"
#include "aqec/device.hpp"
#include "aqec/fitting.hpp"
#include "aqec/protocol.hpp"

#include <optional>
#include <vector>

namespace aqec {

struct RamseyOptions {
  int cycles = 0;             // interrogation periods M
  double tau_int_us = 150.0;  // interrogation time per period
  bool corrected = false;     // run the AQEC cycle after each period
  int phi_points = 21;
  std::optional<int> shots;   // binomial shot noise when set
  std::uint64_t seed = 1;
  bool physical_delta = false;  // imprint a real detuning instead of a
  double delta_khz = 0.0;       // virtual phase (validation mode)
};

struct RamseyRun {
  int fock_m = 0, fock_n = 1;
  int cycles = 0;
  double t_int_us = 0.0;
  std::vector<double> phi;
  std::vector<double> p_g;
  FringeFit fit;
};

/// Ramsey fringe of the probe (|m> + e^{i phi}|n>)/sqrt2 after M
/// interrogation periods, measured in the (|m> +- |n>)/sqrt2 basis with
/// leakage split evenly between the outcomes.
RamseyRun ramsey(const CodeSpec& probe, const CycleSpec& cycle, const DeviceParams& device,
                 const RamseyOptions& opts);

struct Overheads {
  double encode_decode_us = 4.08;
  double recovery_us = 2.0;
  double reset_us = 0.71;
  double readout_us = 2.0;

  static Overheads for_probe(int m, int n);
};

struct FisherResult {
  double amplitude = 0.0;
  double offset = 0.0;
  int fock_m = 0, fock_n = 1;
  double t_int_us = 0.0;
  double t_tot_us = 0.0;
  double fisher_khz_inv = 0.0;
};

/// Normalized Fisher information F = A^2 (n-m)^2 t_int^2 / (B(1-B) t_tot),
/// reported in 1/kHz. Throws when B(1-B) degenerates.
FisherResult fisher(const RamseyRun& run, const Overheads& overheads, bool corrected);

/// Same quantity evaluated from the raw fringe samples through the
/// max-over-phase derivative form.
double fisher_from_curve(const RamseyRun& run, const Overheads& overheads, bool corrected);

double gain_db(double f_a, double f_b);

struct InterrogationSweep {
  std::vector<int> cycles;
  std::vector<FisherResult> points;
  int optimal_index = -1;
  bool interior_optimum = false;  // false when F still rises at the range end
};

InterrogationSweep sweep_interrogation(const CodeSpec& probe, const CycleSpec& cycle,
                                       const DeviceParams& device, const Overheads& overheads,
                                       int max_cycles, bool corrected,
                                       const RamseyOptions& base = {});

}  // namespace aqec

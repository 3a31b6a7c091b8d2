#include "aqec/metrology.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

int fock_index(const Vector& v) {
  for (int k = 0; k < v.size(); ++k)
    if (std::abs(v(k)) > 0.5) return k;
  throw std::invalid_argument("ramsey: probe is not a two-component Fock code");
}

}  // namespace

RamseyRun ramsey(const CodeSpec& probe, const CycleSpec& cycle, const DeviceParams& device,
                 const RamseyOptions& opts) {
  const int m = fock_index(probe.logical_zero);
  const int n = fock_index(probe.logical_one);
  if (opts.corrected && probe.error_subspaces.empty())
    throw std::invalid_argument("ramsey: corrected mode needs a recovery map");

  CycleSpec cyc = cycle;
  cyc.t_wait_us = opts.tau_int_us;
  if (opts.physical_delta) cyc.idle.cavity_detuning_mhz = opts.delta_khz * 1e-3;
  CycleEngine engine(probe, cyc, device);

  RamseyRun run;
  run.fock_m = m;
  run.fock_n = n;
  run.cycles = opts.cycles;
  run.t_int_us = opts.cycles * opts.tau_int_us;

  HilbertSpec spec{probe.dim, 2, 1};

  std::vector<double> phis(opts.phi_points);
  for (int i = 0; i < opts.phi_points; ++i) phis[i] = kTwoPi * i / opts.phi_points;

  Vector plus = Vector::Zero(probe.dim), minus = Vector::Zero(probe.dim);
  plus(m) = plus(n) = 1.0 / std::sqrt(2.0);
  minus(m) = 1.0 / std::sqrt(2.0);
  minus(n) = -1.0 / std::sqrt(2.0);

  std::vector<double> pg(opts.phi_points, 0.0);
  parallel_for(opts.phi_points, [&](int i) {
    Vector cav = Vector::Zero(probe.dim);
    cav(m) = 1.0 / std::sqrt(2.0);
    cav(n) = std::exp(cplx(0, phis[i])) / std::sqrt(2.0);
    Vector full = lift_cavity(spec, cav, 0).amplitudes;
    DensityOperator rho{spec, full * full.adjoint()};

    for (int k = 0; k < opts.cycles; ++k) {
      rho = opts.corrected ? engine.run_cycle(rho)
                           : engine.idle_only(rho, cyc.total_cycle_us());
    }
    Matrix cav_rho = partial_trace(rho, Subsystem::Cavity);
    // uncorrected runs unwind the deterministic idle phases at decode time;
    // corrected runs exit each cycle in the compensated code frame
    if (!opts.corrected && opts.cycles > 0) {
      const double t = opts.cycles * cyc.total_cycle_us();
      const auto& energies = engine.idle_diagonal_energies();
      Vector ph(probe.dim);
      for (int f = 0; f < probe.dim; ++f) ph(f) = std::exp(cplx(0, energies(f) * t));
      cav_rho = ph.asDiagonal() * cav_rho * ph.conjugate().asDiagonal();
    }
    const double p_plus = (plus.adjoint() * cav_rho * plus).value().real();
    const double p_minus = (minus.adjoint() * cav_rho * minus).value().real();
    pg[i] = p_plus + 0.5 * std::max(0.0, 1.0 - p_plus - p_minus);
  });

  if (opts.shots) {
    Rng rng(opts.seed);
    for (auto& p : pg) {
      int hits = 0;
      for (int s = 0; s < *opts.shots; ++s)
        if (rng.uniform(0.0, 1.0) < p) ++hits;
      p = double(hits) / *opts.shots;
    }
  }

  run.phi = phis;
  run.p_g = pg;
  run.fit = fit_fringe(run.phi, run.p_g);
  if (run.fit.amplitude < 1e-4)
    throw std::runtime_error("ramsey: fringe contrast below the fit threshold");
  return run;
}

Overheads Overheads::for_probe(int m, int n) {
  Overheads ov;
  ov.encode_decode_us = (m == 0 && n == 1) ? 3.08 : 4.08;
  return ov;
}

FisherResult fisher(const RamseyRun& run, const Overheads& overheads, bool corrected) {
  FisherResult res;
  res.amplitude = run.fit.amplitude;
  res.offset = run.fit.offset;
  res.fock_m = run.fock_m;
  res.fock_n = run.fock_n;
  res.t_int_us = run.t_int_us;
  const double per_cycle_overhead =
      corrected ? overheads.recovery_us + overheads.reset_us : 0.0;
  res.t_tot_us = run.t_int_us + run.cycles * per_cycle_overhead +
                 overheads.encode_decode_us + overheads.readout_us;
  const double b = res.offset;
  if (b * (1.0 - b) <= 1e-9)
    throw std::runtime_error("fisher: degenerate offset B(1-B) <= 0");
  const int dn = run.fock_n - run.fock_m;
  const double f_us = res.amplitude * res.amplitude * dn * dn * res.t_int_us *
                      res.t_int_us / (b * (1.0 - b) * res.t_tot_us);
  res.fisher_khz_inv = f_us * 1e-3;
  return res;
}

double fisher_from_curve(const RamseyRun& run, const Overheads& overheads, bool corrected) {
  const int np = static_cast<int>(run.phi.size());
  if (np < 5) throw std::invalid_argument("fisher_from_curve: too few points");
  const double t_tot = run.t_int_us +
                       (corrected ? run.cycles * (overheads.recovery_us + overheads.reset_us)
                                  : 0.0) +
                       overheads.encode_decode_us + overheads.readout_us;
  const int dn = run.fock_n - run.fock_m;
  double best = 0.0;
  for (int i = 0; i < np; ++i) {
    const int prev = (i + np - 1) % np;
    const int next = (i + 1) % np;
    const double dphi = kTwoPi / np;
    const double dp_dphi = (run.p_g[next] - run.p_g[prev]) / (2 * dphi);
    const double dp_ddelta = dp_dphi * dn * run.t_int_us * kTwoPi;  // delta in MHz
    const double p = std::clamp(run.p_g[i], 1e-6, 1.0 - 1e-6);
    // two-outcome Fisher information for P and 1-P
    const double fi = dp_ddelta * dp_ddelta / (p * (1.0 - p));
    best = std::max(best, fi);
  }
  // delta was expressed in angular MHz above; convert to the same 1/kHz
  // normalization as the closed form
  const double f_us = best / (kTwoPi * kTwoPi) / t_tot;
  return f_us * 1e-3;
}

double gain_db(double f_a, double f_b) {
  if (!(f_a > 0) || !(f_b > 0)) throw std::invalid_argument("gain_db: needs positive inputs");
  return 10.0 * std::log10(f_a / f_b);
}

InterrogationSweep sweep_interrogation(const CodeSpec& probe, const CycleSpec& cycle,
                                       const DeviceParams& device,
                                       const Overheads& overheads, int max_cycles,
                                       bool corrected, const RamseyOptions& base) {
  InterrogationSweep sweep;
  double best = -1;
  for (int mm = 1; mm <= max_cycles; ++mm) {
    RamseyOptions opts = base;
    opts.cycles = mm;
    opts.corrected = corrected;
    auto run = ramsey(probe, cycle, device, opts);
    auto f = fisher(run, overheads, corrected);
    sweep.cycles.push_back(mm);
    sweep.points.push_back(f);
    if (f.fisher_khz_inv > best) {
      best = f.fisher_khz_inv;
      sweep.optimal_index = static_cast<int>(sweep.points.size()) - 1;
    }
  }
  sweep.interior_optimum =
      sweep.optimal_index >= 0 &&
      sweep.optimal_index + 1 < static_cast<int>(sweep.points.size());
  return sweep;
}

}  // namespace aqec

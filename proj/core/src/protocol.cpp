#include "aqec/protocol.hpp"

#include "aqec/hamiltonian.hpp"
#include "aqec/tomography.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

/// Dressed ground-level shift of a two-level system driven at detuning
/// delta with amplitude omega (both angular): the branch adiabatically
/// connected to |g>.
double stark_shift(double delta, double omega) {
  if (omega == 0.0) return 0.0;
  const double r = std::sqrt(delta * delta + omega * omega);
  return delta >= 0 ? 0.5 * (delta - r) : 0.5 * (delta + r);
}

/// Qubit-ground cavity level energies (angular) including Kerr and the PASS
/// Stark shifts; the amplitude of |n> evolves as exp(-i e_n t).
RealVector cavity_level_energies(const DeviceParams& device, int dim,
                                 const std::optional<PassDrive>& drive) {
  RealVector e = cavity_diagonal_energies(device, dim);
  if (!drive || drive->amplitude_mhz == 0.0) return e;
  const double chi = device.chi_qc_mhz;
  const double omega = mhz_to_angular(drive->amplitude_mhz);
  for (int n = 0; n < dim; ++n) {
    // qubit transition at n photons relative to the drive frequency
    const double delta_mhz = -chi * n + 0.5 * device.chi2_qc_mhz * n * (n - 1) -
                             drive->detuning_chi_units * chi;
    e(n) += stark_shift(mhz_to_angular(delta_mhz), omega);
  }
  return e;
}

}  // namespace

RealVector pass_phase_rates(const DeviceParams& device, int dim,
                            const std::optional<PassDrive>& drive) {
  RealVector e = cavity_level_energies(device, dim, drive);
  RealVector f(dim);
  for (int n = 0; n < dim; ++n) f(n) = -(e(n) - e(0)) / kTwoPi;
  return f;
}

namespace {

std::vector<std::array<int, 4>> pass_conditions(const CodeSpec& code) {
  // combos c: f[c0] - f[c1] - f[c2] + f[c3] = 0
  if (code.name == "binomial" || code.name.rfind("gbin", 0) == 0)
    return {{4, 2, 3, 1}};
  if (code.name == "sqrt17") return {{3, 2, 1, 0}, {4, 1, 3, 0}};
  if (code.name.rfind("fock", 0) == 0 && !code.error_subspaces.empty()) {
    // pair code (|m>, |n>): error transparency of the loss images
    int m = -1, n = -1;
    for (int k = 0; k < code.dim; ++k) {
      if (std::abs(code.logical_zero(k)) > 0.5) m = k;
      if (std::abs(code.logical_one(k)) > 0.5) n = k;
    }
    return {{n, m, n - 1, m - 1}};
  }
  throw std::invalid_argument("tune_pass: no error-transparent conditions for " + code.name);
}

}  // namespace

PassTuning tune_pass(const CodeSpec& code, const DeviceParams& device,
                     double detuning_chi_units, double max_amplitude_mhz) {
  const auto conditions = pass_conditions(code);
  const int dim = 6;

  auto residuals = [&](double amp) {
    PassDrive d{detuning_chi_units, amp};
    RealVector f = pass_phase_rates(device, dim, amp > 0 ? std::optional<PassDrive>(d)
                                                         : std::nullopt);
    std::vector<double> r;
    for (const auto& c : conditions) r.push_back(f(c[0]) - f(c[1]) - f(c[2]) + f(c[3]));
    return r;
  };
  auto objective = [&](double amp) {
    double s = 0;
    for (double r : residuals(amp)) s += r * r;
    return s;
  };

  // dense scan, then golden-section refinement of the squared-residual sum
  const int n_scan = 400;
  double best_amp = 0.0, best_obj = objective(0.0);
  for (int i = 1; i <= n_scan; ++i) {
    const double amp = max_amplitude_mhz * i / n_scan;
    const double o = objective(amp);
    if (o < best_obj) {
      best_obj = o;
      best_amp = amp;
    }
  }
  if (conditions.size() == 1 && best_obj > 1e-12 && best_amp > 0 &&
      best_amp >= max_amplitude_mhz * (1.0 - 1.0 / n_scan))
    throw std::runtime_error("tune_pass: no zero crossing inside the sweep range");
  double lo = std::max(0.0, best_amp - max_amplitude_mhz / n_scan);
  double hi = std::min(max_amplitude_mhz, best_amp + max_amplitude_mhz / n_scan);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(x2);
    }
  }
  best_amp = 0.5 * (a + b);
  if (objective(0.0) <= objective(best_amp)) best_amp = 0.0;

  PassTuning tuning;
  tuning.detuning_chi_units = detuning_chi_units;
  tuning.amplitude_mhz = best_amp;
  tuning.rates_mhz = pass_phase_rates(
      device, dim,
      best_amp > 0 ? std::optional<PassDrive>(PassDrive{detuning_chi_units, best_amp})
                   : std::nullopt);
  tuning.condition_residuals_mhz = residuals(best_amp);
  for (const auto& c : conditions)
    tuning.condition_scales_mhz.push_back(
        std::abs(tuning.rates_mhz(c[0]) - tuning.rates_mhz(c[1])));
  return tuning;
}

LindbladModel idle_model(const HilbertSpec& spec, const DeviceParams& device,
                         const IdleConfig& config) {
  DeviceParams dev = device;
  if (!config.kerr) {
    dev.kerr_c_mhz = 0.0;
    dev.chi2_qc_mhz = 0.0;
  }
  LindbladModel model;
  model.spec = spec;
  model.hamiltonian = system_hamiltonian(dev, spec, FrameChoice::DispersiveTwoLevel).mat;

  if (config.pass && config.pass->amplitude_mhz > 0 && config.kerr) {
    // diagonal Stark correction on the cavity
    RealVector with = cavity_level_energies(dev, spec.cavity_dim, config.pass);
    RealVector without = cavity_level_energies(dev, spec.cavity_dim, std::nullopt);
    Matrix corr = Matrix::Zero(spec.cavity_dim, spec.cavity_dim);
    for (int n = 0; n < spec.cavity_dim; ++n) corr(n, n) = with(n) - without(n);
    model.hamiltonian += embed(spec, Subsystem::Cavity, corr);
  }

  auto ops = build_operators(spec);
  if (config.cavity_loss) model.collapse.push_back({ops.a_c, 1.0 / dev.t1_c_us});
  if (config.cavity_thermal && dev.n_th_c > 0)
    model.collapse.push_back({ops.a_c.adjoint(), dev.n_th_c / dev.t1_c_us});
  if (config.cavity_dephasing) {
    // The measured cavity T_phi already contains the dephasing caused by
    // thermal ancilla excursions. With the ancilla jumps modeled explicitly
    // the intrinsic part is what belongs in the n-collapse; effective values
    // re-fitted for the logical codes are used as given.
    double tphi = config.tphi_c_eff_us;
    if (tphi <= 0) {
      double rate = 1.0 / dev.tphi_c_us;
      if (config.qubit_noise) rate = std::max(rate - dev.n_th_q / dev.t1_q_us, 1e-9);
      tphi = 1.0 / rate;
    }
    model.collapse.push_back({ops.n_c, 2.0 / tphi});
  }
  if (config.qubit_noise && spec.qubit_dim == 2) {
    model.collapse.push_back({ops.sm, 1.0 / dev.t1_q_us});
    if (dev.n_th_q > 0) model.collapse.push_back({ops.sp, dev.n_th_q / dev.t1_q_us});
    model.collapse.push_back({ops.sz, 0.5 / dev.tphi_q_us});
  }
  if (config.cavity_detuning_mhz != 0.0)
    model.hamiltonian +=
        mhz_to_angular(config.cavity_detuning_mhz) * build_operators(spec).n_c;
  if (config.residual_dephasing_per_cycle > 0) {
    const double rate = -std::log1p(-config.residual_dephasing_per_cycle) /
                        config.cycle_for_residual_us;
    for (int n = 0; n < spec.cavity_dim; ++n) {
      Matrix p = Matrix::Zero(spec.cavity_dim, spec.cavity_dim);
      p(n, n) = 1.0;
      model.collapse.push_back({embed(spec, Subsystem::Cavity, p), rate});
    }
  }
  return model;
}

CycleEngine::CycleEngine(const CodeSpec& code, const CycleSpec& cycle,
                         const DeviceParams& device)
    : code_(code), cycle_(cycle), device_(device) {
  const bool on_ancilla = code.name == "transmon";
  spec_ = on_ancilla ? HilbertSpec{2, 2, 1} : HilbertSpec{code.dim, 2, 1};
  spec_.validate();

  encode_isometry_ = Matrix::Zero(spec_.total(), 2);
  if (on_ancilla) {
    encode_isometry_.col(0) = basis_state(spec_, 0, 0).amplitudes;
    encode_isometry_.col(1) = basis_state(spec_, 0, 1).amplitudes;
  } else {
    encode_isometry_.col(0) = lift_cavity(spec_, code.logical_zero, 0).amplitudes;
    encode_isometry_.col(1) = lift_cavity(spec_, code.logical_one, 0).amplitudes;
  }

  idle_model_ = idle_model(spec_, device, cycle.idle);

  // deterministic qubit-ground diagonal phases for decode unwinding and
  // recovery pre-distortion; a physically-imprinted sensing detuning is the
  // signal and is excluded from the unwinding frame
  IdleConfig base_config = cycle.idle;
  base_config.cavity_detuning_mhz = 0.0;
  const Matrix base_h = idle_model(spec_, device, base_config).hamiltonian;
  unwind_phases_.resize(spec_.cavity_dim);
  for (int n = 0; n < spec_.cavity_dim; ++n) {
    const auto s = lift_cavity(spec_, Vector::Unit(spec_.cavity_dim, n), 0).amplitudes;
    unwind_phases_(n) = (s.adjoint() * base_h * s).value().real();
  }

  // decoherence also runs through the recovery and reset stages; the ideal
  // tier folds that exposure into the idle segment
  const double idle_exposure =
      cycle.tier == ExecutionTier::Ideal
          ? cycle.total_cycle_us()
          : cycle.t_wait_us + cycle.reset_ns * 1e-3;
  if (!code.error_subspaces.empty() && !on_ancilla) {
    const double kappa = cycle.idle.cavity_loss ? 1.0 / device.t1_c_us : 0.0;
    const double theta = std::atan(std::exp(-2.0 * kappa * idle_exposure));
    RealVector idle_phases(spec_.cavity_dim);
    for (int n = 0; n < spec_.cavity_dim; ++n)
      idle_phases(n) = -(unwind_phases_(n) - unwind_phases_(0)) * idle_exposure;
    const double theta_target = code.approximate ? std::atan(1.0) : theta;
    auto target = make_aqec_target(code_, theta_target, cycle.phases, idle_phases);
    recovery_ = ideal_recovery_unitary(target);
  } else {
    recovery_ = Matrix::Identity(spec_.total(), spec_.total());
  }

  // lifted logical Paulis for error surrogates
  auto paulis = pauli_basis();
  for (const auto& p : paulis) {
    Matrix lifted = Matrix::Identity(spec_.total(), spec_.total()) -
                    encode_isometry_ * encode_isometry_.adjoint();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        lifted += p(i, j) * encode_isometry_.col(i) * encode_isometry_.col(j).adjoint();
    logical_paulis_.push_back(lifted);
  }

  // compose the ideal-tier cycle channel on the vectorized state
  Channel idle_ch =
      Channel::from_liouvillian_exp(liouvillian(idle_model_.hamiltonian, idle_model_.collapse),
                                    idle_exposure);
  idle_channel_ = idle_ch;
  Channel rec = Channel::from_unitary(recovery_);
  Channel chain = rec.compose_after(idle_ch);
  if (cycle.gate_error_rate > 0) {
    std::vector<Matrix> kraus;
    kraus.push_back(std::sqrt(1.0 - cycle.gate_error_rate) *
                    Matrix::Identity(spec_.total(), spec_.total()));
    for (const auto& lp : logical_paulis_)
      kraus.push_back(std::sqrt(cycle.gate_error_rate / 4.0) * lp);
    chain = Channel::from_kraus(kraus).compose_after(chain);
  }
  std::optional<ResetErrorModel> err;
  if (cycle.reset_error_bound) err = ResetErrorModel{logical_paulis_, 0.02};
  chain = reset_channel(spec_, cycle.phases, err).compose_after(chain);
  cycle_channel_ = chain;
}

DensityOperator CycleEngine::run_cycle(const DensityOperator& rho) const {
  if (cycle_.tier == ExecutionTier::Pulse && cycle_.recovery_pulse) {
    // idle, then the recovery pulse with decoherence, then the reset channel
    DensityOperator state{spec_, idle_channel_.apply(rho.rho)};
    LindbladModel gate_model = idle_model_;
    const auto& pulse = *cycle_.recovery_pulse;
    auto ops = build_operators(spec_);
    const Matrix controls[4] = {ops.sx, ops.sy, Matrix(ops.a_c.adjoint() + ops.a_c),
                                Matrix(cplx(0, 1) * (ops.a_c.adjoint() - ops.a_c))};
    for (int ch = 0; ch < 4; ++ch) {
      const auto& samples = pulse.channels[ch];
      const double dt_ns = pulse.dt_ns;
      gate_model.controls.push_back(
          {controls[ch], [samples, dt_ns](double t_us) {
             // Catmull-Rom interpolation on midpoint-sampled envelopes
             const double x = t_us * 1e3 / dt_ns - 0.5;
             const int n = static_cast<int>(samples.size());
             const int j = std::clamp(static_cast<int>(std::floor(x)), 0, n - 1);
             auto at = [&](int k) { return samples[std::clamp(k, 0, n - 1)]; };
             const double u = std::clamp(x - j, 0.0, 1.0);
             const double p0 = at(j - 1), p1 = at(j), p2 = at(j + 1), p3 = at(j + 2);
             const double value =
                 p1 + 0.5 * u * (p2 - p0 +
                                 u * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                      u * (3 * (p1 - p2) + p3 - p0)));
             return mhz_to_angular(value);
           }});
    }
    EvolveOptions opts;
    opts.rtol = 1e-7;
    opts.atol = 1e-10;
    state = evolve(gate_model, state, pulse.duration_ns() * 1e-3, opts);
    std::optional<ResetErrorModel> err;
    if (cycle_.reset_error_bound) err = ResetErrorModel{logical_paulis_, 0.02};
    auto reset = reset_channel(spec_, cycle_.phases, err);
    return {spec_, reset.apply(state.rho)};
  }
  return {spec_, cycle_channel_.apply(rho.rho)};
}

DensityOperator CycleEngine::idle_only(const DensityOperator& rho, double duration_us) const {
  const long long key = static_cast<long long>(std::llround(duration_us * 1e3));
  auto it = idle_cache_.find(key);
  if (it == idle_cache_.end()) {
    it = idle_cache_
             .emplace(key, Channel::from_liouvillian_exp(
                               liouvillian(idle_model_.hamiltonian, idle_model_.collapse),
                               duration_us))
             .first;
  }
  return {spec_, it->second.apply(rho.rho)};
}

DensityOperator CycleEngine::encode(const Matrix& rho_logical) const {
  return {spec_, encode_isometry_ * rho_logical * encode_isometry_.adjoint()};
}

Matrix CycleEngine::decode(const DensityOperator& rho, double unwind_time_us) const {
  Matrix state = rho.rho;
  if (unwind_time_us != 0.0) {
    Vector phases(spec_.total());
    for (int i = 0; i < spec_.total(); ++i) phases(i) = 1.0;
    for (int n = 0; n < spec_.cavity_dim; ++n)
      for (int q = 0; q < 2; ++q)
        phases((n * 2 + q)) = std::exp(cplx(0, unwind_phases_(n) * unwind_time_us));
    state = phases.asDiagonal() * state * phases.conjugate().asDiagonal();
  }
  Matrix logical = encode_isometry_.adjoint() * state * encode_isometry_;
  const double leak = 1.0 - logical.trace().real();
  logical += 0.5 * std::max(0.0, leak) * Matrix::Identity(2, 2);
  return logical;
}

LifetimeResult lifetime_experiment(const CodeSpec& code, const CycleSpec& cycle,
                                   const DeviceParams& device, const LifetimeOptions& opts) {
  CycleEngine engine(code, cycle, device);

  Eigen::Matrix2cd gg, ee, plus, minus_i;
  gg << 1, 0, 0, 0;
  ee << 0, 0, 0, 1;
  plus << 0.5, 0.5, 0.5, 0.5;
  minus_i << 0.5, cplx(0, 0.5), cplx(0, -0.5), 0.5;
  std::array<Matrix, 4> rho_logical = {gg, ee, plus, minus_i};

  std::array<DensityOperator, 4> states = {
      engine.encode(rho_logical[0]), engine.encode(rho_logical[1]),
      engine.encode(rho_logical[2]), engine.encode(rho_logical[3])};

  const double step_us = cycle.total_cycle_us();
  LifetimeResult result;
  result.encoding = code.name;
  auto ideal = chi_identity();
  for (int k = 0; k <= opts.cycles; ++k) {
    const double t = k * step_us;
    std::array<Matrix, 4> outs;
    for (int i = 0; i < 4; ++i)
      outs[i] = engine.decode(states[i], opts.corrected ? 0.0 : t);
    auto chi = chi_from_outputs(outs);
    result.t_us.push_back(t);
    result.f_chi.push_back(process_fidelity(chi, ideal));
    if (k == opts.cycles) break;
    for (int i = 0; i < 4; ++i) {
      states[i] = opts.corrected ? engine.run_cycle(states[i])
                                 : engine.idle_only(states[i], step_us);
    }
  }
  result.fit = fit_exponential(
      [&] {
        std::vector<std::pair<double, double>> pts;
        for (size_t i = 0; i < result.t_us.size(); ++i)
          pts.push_back({result.t_us[i], result.f_chi[i]});
        return pts;
      }(),
      0.25);
  return result;
}

CycleSpec default_cycle(const CodeSpec& code, const DeviceParams& device,
                        ExecutionTier tier) {
  CycleSpec cycle;
  cycle.tier = tier;
  if (code.name == "binomial") {
    cycle.idle.tphi_c_eff_us = 34000.0;
    cycle.idle.pass = PassDrive{-3.5, tune_pass(code, device, -3.5).amplitude_mhz};
    cycle.idle.residual_dephasing_per_cycle = 0.001;
    cycle.gate_error_rate = 0.0182;
  } else if (code.name == "sqrt17") {
    cycle.idle.tphi_c_eff_us = 24000.0;
    cycle.idle.pass = PassDrive{-1.325, tune_pass(code, device, -1.325).amplitude_mhz};
    cycle.idle.residual_dephasing_per_cycle = 0.011;
    cycle.gate_error_rate = 0.0179;
  } else if (code.name == "fock14") {
    cycle.idle.pass = PassDrive{-3.5, tune_pass(code, device, -3.5).amplitude_mhz};
    cycle.gate_error_rate = 0.0182;
  }
  cycle.idle.cycle_for_residual_us = cycle.total_cycle_us();
  return cycle;
}

double ErrorBudget::row(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return r.value;
  throw std::out_of_range("no budget row named " + name);
}

double single_cycle_epsilon(const CodeSpec& code, const CycleSpec& cycle,
                            const DeviceParams& device) {
  CycleEngine engine(code, cycle, device);
  auto chi = process_tomography([&](const Matrix& rho_logical) {
    auto state = engine.encode(rho_logical);
    state = engine.run_cycle(state);
    return engine.decode(state);
  });
  const double f = process_fidelity(chi, chi_identity());
  return 1.0 - (f - 0.25) / 0.75;
}

ErrorBudget error_budget(const CodeSpec& code, const CycleSpec& cycle,
                         const DeviceParams& device,
                         const std::optional<PulseSchedule>& recovery_pulse) {
  if (code.error_subspaces.empty())
    throw std::invalid_argument("error_budget: encoding has no recovery");
  ErrorBudget budget;
  const double t_cycle = cycle.total_cycle_us();

  // multi-photon loss and gain: exact amplitude-damping cascade over the
  // tomography-averaged Fock distribution
  {
    const double kappa = 1.0 / device.t1_c_us;
    const double ek = std::exp(-kappa * cycle.t_wait_us);
    double p_multi = 0.0, p_gain = 0.0;
    for (int i = 0; i < 2; ++i) {
      const Vector& v = code.logical(i);
      for (int n = 0; n < v.size(); ++n) {
        const double w = 0.5 * std::norm(v(n));
        if (w < 1e-14) continue;
        const double stay = std::pow(ek, n);
        const double one = n * std::pow(ek, n - 1) * (1 - ek);
        p_multi += w * (1.0 - stay - one);
        p_gain += w * (n + 1) * device.n_th_c / device.t1_c_us * cycle.t_wait_us;
      }
    }
    budget.rows.push_back({"multi_photon_loss_gain", p_multi + p_gain});
  }

  // intrinsic dephasing: simulated with only the effective pure dephasing on
  {
    CycleSpec iso = cycle;
    iso.tier = ExecutionTier::Ideal;
    iso.gate_error_rate = 0.0;
    iso.reset_error_bound = false;
    iso.idle = IdleConfig{};
    iso.idle.tphi_c_eff_us = cycle.idle.tphi_c_eff_us;
    iso.idle.cavity_loss = false;
    iso.idle.cavity_thermal = false;
    iso.idle.qubit_noise = false;
    iso.idle.kerr = false;
    iso.idle.pass.reset();
    budget.rows.push_back({"intrinsic_dephasing", single_cycle_epsilon(code, iso, device)});
  }

  // induced dephasing: ancilla thermal excitation plus the configured
  // residual Kerr/PASS imperfection
  {
    const double thermal = device.n_th_q * (1.0 - std::exp(-t_cycle / device.t1_q_us));
    budget.rows.push_back(
        {"induced_dephasing", thermal + cycle.idle.residual_dephasing_per_cycle});
  }

  // gate error: pulse-level vs ideal-unitary delta on the full cycle
  {
    double gate = 0.0;
    if (recovery_pulse) {
      CycleSpec ideal_cycle = cycle;
      ideal_cycle.tier = ExecutionTier::Ideal;
      ideal_cycle.gate_error_rate = 0.0;
      CycleSpec pulse_cycle = ideal_cycle;
      pulse_cycle.tier = ExecutionTier::Pulse;
      pulse_cycle.recovery_pulse = recovery_pulse;
      const double eps_pulse = single_cycle_epsilon(code, pulse_cycle, device);
      const double eps_ideal = single_cycle_epsilon(code, ideal_cycle, device);
      gate = std::max(0.0, eps_pulse - eps_ideal);
      budget.direct_epsilon = eps_pulse;
    } else {
      gate = cycle.gate_error_rate;
    }
    budget.rows.push_back({"gate_error", gate});
  }

  // reset error: measured e-branch bound scaled by the jump probability
  {
    const double n_bar = code.average_photon_number;
    const double p_jump = 1.0 - std::exp(-cycle.t_wait_us * n_bar / device.t1_c_us);
    budget.rows.push_back({"reset_error", cycle.reset_error_bound ? 0.02 * p_jump : 0.0});
  }

  for (const auto& r : budget.rows) budget.total += r.value;
  return budget;
}

TransferTarget cascaded_target(int losses, int gains, int dephasings, double theta,
                               const ResetPhaseTable& phases) {
  CodeSpec code = generalized_binomial(losses, gains, dephasings);
  const int dc = code.dim;
  HilbertSpec spec{dc, 2, 1};

  const Matrix a = annihilation(dc);
  const Matrix ad = a.adjoint();
  const Matrix num = number_op(dc);

  // subspace chains; level 0 of the loss chain is the code itself
  using Basis = std::array<Vector, 2>;
  auto image_basis = [&](const Matrix& op, int power) {
    Matrix opk = Matrix::Identity(dc, dc);
    for (int i = 0; i < power; ++i) opk = op * opk;
    Basis b;
    for (int i = 0; i < 2; ++i) {
      Vector v = opk * code.logical(i);
      const double nn = v.norm();
      if (nn < 1e-12) throw std::runtime_error("cascaded_target: error image vanishes");
      b[i] = v / nn;
    }
    return b;
  };

  std::vector<Basis> loss{{code.logical_zero, code.logical_one}};
  for (int k = 1; k <= losses; ++k) loss.push_back(image_basis(a, k));
  std::vector<Basis> gain;
  for (int k = 1; k <= gains; ++k) gain.push_back(image_basis(ad, k));

  // dephasing chain: n^k images orthogonalized against the code and the
  // lower dephasing levels
  std::vector<Basis> deph;
  {
    std::array<std::vector<Vector>, 2> built = {
        std::vector<Vector>{code.logical_zero}, std::vector<Vector>{code.logical_one}};
    for (int k = 1; k <= dephasings; ++k) {
      Basis b;
      for (int i = 0; i < 2; ++i) {
        Matrix nk = Matrix::Identity(dc, dc);
        for (int p = 0; p < k; ++p) nk = num * nk;
        Vector v = nk * code.logical(i);
        for (const auto& u : built[i]) v -= u.dot(v) * u;
        const double nn = v.norm();
        if (nn < 1e-9)
          throw std::runtime_error("cascaded_target: dephasing subspace degenerate");
        b[i] = v / nn;
        built[i].push_back(b[i]);
      }
      deph.push_back(b);
    }
  }

  // distortion of the code inputs
  const double kt = -std::log(std::tan(theta)) / 2.0;
  Vector distort(dc);
  for (int n = 0; n < dc; ++n) distort(n) = std::exp(-0.5 * kt * n);
  auto precomp = [&](const Vector& v, bool from_excited) {
    Vector w(dc);
    for (int n = 0; n < dc; ++n)
      w(n) = v(n) * std::exp(cplx(0, -phases.phase(n, from_excited)));
    return w;
  };

  TransferTarget target;
  target.cavity_dim = dc;
  auto add_pair = [&](const Vector& in_c, int in_q, const Vector& out_c, int out_q) {
    target.inputs.push_back(lift_cavity(spec, in_c, in_q).amplitudes);
    target.outputs.push_back(lift_cavity(spec, out_c, out_q).amplitudes);
  };

  for (int i = 0; i < 2; ++i) {
    Vector v = distort.asDiagonal() * code.logical(i);
    add_pair(v / v.norm(), 0, precomp(code.logical(i), false), 0);
  }
  for (int k = 1; k <= losses; ++k)
    for (int i = 0; i < 2; ++i)
      add_pair(loss[k][i], 0, precomp(loss[k - 1][i], true), 1);
  for (int k = 1; k <= gains; ++k)
    for (int i = 0; i < 2; ++i) {
      if (k == 1)
        add_pair(gain[0][i], 0, precomp(gain[0][i], false), 0);  // parked in place
      else
        add_pair(gain[k - 1][i], 0, precomp(gain[k - 2][i], true), 1);
    }
  for (int k = 1; k <= dephasings; ++k)
    for (int i = 0; i < 2; ++i) {
      if (k == 1)
        add_pair(deph[0][i], 0, precomp(deph[0][i], false), 0);
      else
        add_pair(deph[k - 1][i], 0, precomp(deph[k - 2][i], true), 1);
    }

  target.validate();
  return target;
}

}  // namespace aqec

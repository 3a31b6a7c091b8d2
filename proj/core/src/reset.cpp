#include "aqec/reset.hpp"

#include "aqec/detail/ode.hpp"
#include "aqec/fitting.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aqec {

namespace {

cplx steady_xi(const ResetDriveParams& p, const DeviceParams& dev) {
  const double eps = mhz_to_angular(p.epsilon_r_mhz);
  const double delta = mhz_to_angular(p.delta_r_mhz);
  return -eps / cplx(delta, -0.5 * dev.kappa_r());
}

/// Drive envelope and displaced-frame amplitude over the full sequence.
/// Times in us measured from the start of the drive window.
class DriveFrame {
 public:
  DriveFrame(const ResetDriveParams& p, const DeviceParams& dev, double total_us)
      : ramp_(p.ramp_ns * 1e-3),
        hold_(p.hold_ns * 1e-3),
        eps_(mhz_to_angular(p.epsilon_r_mhz)),
        delta_r_(mhz_to_angular(p.delta_r_mhz)),
        kappa_r_(dev.kappa_r()) {
    window_ = 2 * ramp_ + hold_;
    // alpha' = -(i delta + kappa/2) alpha - i eps(t); fixed-step RK4.
    const int steps = std::max(64, static_cast<int>(std::ceil(total_us / 2.5e-4)));
    alpha_.resize(steps + 1);
    dt_ = total_us / steps;
    cplx a = p.start_displaced ? steady_xi(p, dev) : cplx(0, 0);
    alpha_[0] = a;
    auto f = [&](double t, cplx x) {
      return -(cplx(0, delta_r_) + 0.5 * kappa_r_) * x - cplx(0, envelope(t));
    };
    for (int k = 0; k < steps; ++k) {
      const double t = k * dt_;
      cplx k1 = f(t, a);
      cplx k2 = f(t + 0.5 * dt_, a + 0.5 * dt_ * k1);
      cplx k3 = f(t + 0.5 * dt_, a + 0.5 * dt_ * k2);
      cplx k4 = f(t + dt_, a + dt_ * k3);
      a += dt_ / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      alpha_[k + 1] = a;
    }
  }

  double envelope(double t) const {
    if (t < 0 || t >= window_) return 0.0;
    if (ramp_ <= 0) return eps_;
    if (t < ramp_) return eps_ * 0.5 * (1 - std::cos(std::numbers::pi * t / ramp_));
    if (t < ramp_ + hold_) return eps_;
    return eps_ * 0.5 * (1 + std::cos(std::numbers::pi * (t - ramp_ - hold_) / ramp_));
  }

  cplx alpha(double t) const {
    const double x = std::clamp(t / dt_, 0.0, double(alpha_.size() - 1));
    const int k = std::min(static_cast<int>(x), static_cast<int>(alpha_.size()) - 2);
    const double f = x - k;
    return (1 - f) * alpha_[k] + f * alpha_[k + 1];
  }

  double window_us() const { return window_; }

 private:
  double ramp_, hold_, eps_, delta_r_, kappa_r_;
  double window_ = 0, dt_ = 0;
  std::vector<cplx> alpha_;
};

/// One cavity-Fock sector pair (n_left, n_right) of the qubit (x) resonator
/// problem, in the displaced frame and the rotating frame of the resonator
/// drive detuning. The ancilla keeps `qubit_levels` transmon states (the
/// drive amplitude is not small against the anharmonicity, so the third
/// level shifts the dressed splitting appreciably). Basis index =
/// q * dim_r + r.
class SectorBlock {
 public:
  SectorBlock(const ResetDriveParams& p, const DeviceParams& dev, const DriveFrame& frame,
              int n_left, int n_right, int dim_r)
      : frame_(frame),
        dim_q_(p.qubit_levels),
        dim_r_(dim_r),
        n_left_(n_left),
        n_right_(n_right) {
    if (dim_q_ != 2 && dim_q_ != 3)
      throw std::invalid_argument("reset: qubit_levels must be 2 or 3");
    const Matrix iq = Matrix::Identity(dim_q_, dim_q_);
    const Matrix ir = Matrix::Identity(dim_r, dim_r);
    const Matrix aq = annihilation(dim_q_);
    const Matrix nq = number_op(dim_q_);

    nq_full_ = kron(nq, ir);
    drive_q_ = kron(Matrix(aq + aq.adjoint()), ir);
    n_r_ = kron(iq, number_op(dim_r));
    nq_nr_ = kron(nq, number_op(dim_r));
    nq_ar_ = kron(nq, annihilation(dim_r));

    chi_qc_ = mhz_to_angular(dev.chi_qc_mhz);
    chi2_qc_ = mhz_to_angular(dev.chi2_qc_mhz);
    chi_qr_ = mhz_to_angular(dev.chi_qr_mhz);
    kerr_q_ = mhz_to_angular(dev.kerr_q_mhz);
    delta_r_ = mhz_to_angular(p.delta_r_mhz);
    delta_q_ = mhz_to_angular(p.resolved_delta_q_mhz(dev));
    rabi_ = mhz_to_angular(p.rabi_mhz);

    kerr_term_ = Matrix::Zero(dim_q_ * dim_r, dim_q_ * dim_r);
    if (dim_q_ > 2) {
      Matrix anh = Matrix::Zero(dim_q_, dim_q_);
      for (int k = 0; k < dim_q_; ++k) anh(k, k) = -0.5 * kerr_q_ * k * (k - 1);
      kerr_term_ = kron(anh, ir);
    }

    collapse_.push_back(std::sqrt(dev.kappa_r()) * kron(iq, annihilation(dim_r)));
    if (p.include_qubit_decoherence) {
      collapse_.push_back(std::sqrt(1.0 / dev.t1_q_us) * kron(aq, ir));
      collapse_.push_back(std::sqrt(dev.n_th_q / dev.t1_q_us) * kron(Matrix(aq.adjoint()), ir));
      collapse_.push_back(std::sqrt(2.0 / dev.tphi_q_us) * nq_full_);
    }
    drift_ = Matrix::Zero(dim_q_ * dim_r, dim_q_ * dim_r);
    for (const auto& c : collapse_) drift_ -= 0.5 * (c.adjoint() * c);
  }

  /// Ancilla Hamiltonian alone (resonator factors stripped) for a given
  /// displaced amplitude; used for the basis-change rotation.
  Matrix qubit_hamiltonian(int n_sector, double alpha_sq, bool drives_on) const {
    Matrix h = Matrix::Zero(dim_q_, dim_q_);
    const double shift =
        delta_q_ - chi_qc_ * n_sector + 0.5 * chi2_qc_ * n_sector * (n_sector - 1) -
        chi_qr_ * alpha_sq;
    for (int k = 0; k < dim_q_; ++k) h(k, k) = shift * k - 0.5 * kerr_q_ * k * (k - 1);
    if (drives_on) {
      const Matrix aq = annihilation(dim_q_);
      h += 0.5 * rabi_ * (aq + aq.adjoint());
    }
    return h;
  }

  Matrix hamiltonian(double t, int n_sector, bool drives_on) const {
    const cplx al = frame_.alpha(t);
    const double shift =
        delta_q_ - chi_qc_ * n_sector + 0.5 * chi2_qc_ * n_sector * (n_sector - 1) -
        chi_qr_ * std::norm(al);
    Matrix h = shift * nq_full_ + kerr_term_ - chi_qr_ * nq_nr_;
    if (drives_on) h += 0.5 * rabi_ * drive_q_;
    // sideband coupling, rotating at the drive detuning
    const cplx c = -chi_qr_ * al * std::exp(cplx(0, delta_r_ * t));
    h += c * nq_ar_.adjoint() + std::conj(c) * nq_ar_;
    return h;
  }

  Matrix evolve(Matrix x, double t0, double dt, bool drives_on) const {
    if (dt <= 0) return x;
    auto rhs = [&](double t, const Matrix& m) -> Matrix {
      const Matrix hl = hamiltonian(t, n_left_, drives_on);
      Matrix out = cplx(0, -1) * (hl * m);
      if (n_left_ == n_right_) {
        out += cplx(0, 1) * (m * hl);
      } else {
        out += cplx(0, 1) * (m * hamiltonian(t, n_right_, drives_on));
      }
      out += drift_ * m + m * drift_;
      for (const auto& c : collapse_) out += c * m * c.adjoint();
      return out;
    };
    detail::OdeOptions opts;
    opts.rtol = 1e-8;
    opts.atol = 1e-11;
    return detail::integrate_dp54<Matrix>(rhs, std::move(x), t0, dt, opts, "reset");
  }

  Matrix qubit_reduced(const Matrix& x) const {
    Matrix q = Matrix::Zero(dim_q_, dim_q_);
    for (int i = 0; i < dim_q_; ++i)
      for (int j = 0; j < dim_q_; ++j)
        for (int r = 0; r < dim_r_; ++r) q(i, j) += x(i * dim_r_ + r, j * dim_r_ + r);
    return q;
  }

  double resonator_photons(const Matrix& x, double t) const {
    // lab frame: displaced amplitude plus displaced-frame excitation
    return std::norm(frame_.alpha(t)) + (n_r_ * x).trace().real();
  }

  double top_level_population(const Matrix& x) const {
    double p = 0;
    for (int q = 0; q < dim_q_; ++q)
      p += x(q * dim_r_ + dim_r_ - 1, q * dim_r_ + dim_r_ - 1).real();
    return p;
  }

  int qubit_levels() const { return dim_q_; }
  int dim_r() const { return dim_r_; }

 private:
  const DriveFrame& frame_;
  int dim_q_, dim_r_, n_left_, n_right_;
  Matrix nq_full_, drive_q_, n_r_, nq_nr_, nq_ar_, kerr_term_, drift_;
  double chi_qc_ = 0, chi2_qc_ = 0, chi_qr_ = 0, kerr_q_ = 0;
  double delta_r_ = 0, delta_q_ = 0, rabi_ = 0;
  std::vector<Matrix> collapse_;
};

/// Ideal basis-change rotation: maps each bare ancilla level to the dressed
/// eigenstate it is adiabatically connected to under the Rabi drive (the
/// optimized pulses of the experiment serve exactly this purpose). |g> goes
/// to the dark state the dissipation pumps into.
Matrix basis_change_gate(const SectorBlock& blk, const Matrix& h_qubit, int dim_r) {
  const int dq = static_cast<int>(h_qubit.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_qubit);
  // assign eigenvectors to bare levels by dominant overlap
  std::vector<int> claimed(dq, -1);
  for (int bare = 0; bare < dq; ++bare) {
    double best = -1;
    int pick = -1;
    for (int k = 0; k < dq; ++k) {
      bool taken = false;
      for (int b = 0; b < bare; ++b) taken |= (claimed[b] == k);
      if (taken) continue;
      const double w = std::norm(es.eigenvectors()(bare, k));
      if (w > best) {
        best = w;
        pick = k;
      }
    }
    claimed[bare] = pick;
  }
  Matrix u = Matrix::Zero(dq, dq);
  for (int bare = 0; bare < dq; ++bare) {
    Vector v = es.eigenvectors().col(claimed[bare]);
    const cplx ov = v(bare);
    if (std::abs(ov) > 1e-12) v *= std::conj(ov) / std::abs(ov);  // fix phase
    u.col(bare) = v;
  }
  (void)blk;
  return kron(u, Matrix::Identity(dim_r, dim_r));
}

int displaced_dim(const ResetDriveParams& p) {
  if (p.resonator_dim < 20)
    throw std::invalid_argument("reset simulation requires resonator_dim >= 20");
  return 8;
}

/// Shared sequencing: basis change, drive window, basis change back,
/// relaxation wait. Samples observables at the given times (us).
class ResetSequence {
 public:
  ResetSequence(const ResetDriveParams& p, const DeviceParams& dev)
      : params_(p),
        device_(dev),
        dim_r_(displaced_dim(p)),
        total_us_((2 * p.ramp_ns + p.hold_ns + p.post_wait_ns) * 1e-3),
        frame_(p, dev, total_us_ + 1e-6) {}

  SectorBlock block(int n_left, int n_right) const {
    return SectorBlock(params_, device_, frame_, n_left, n_right, dim_r_);
  }

  Matrix initial_block(int qubit_level) const {
    Vector v = Vector::Zero(params_.qubit_levels * dim_r_);
    v(qubit_level * dim_r_) = 1.0;
    return v * v.adjoint();
  }

  /// Rotation into the dressed frame, evaluated at the undisplaced start of
  /// the window (the state then follows the slow ramp adiabatically).
  Matrix rotation(const SectorBlock& blk, int n_sector) const {
    return basis_change_gate(blk, blk.qubit_hamiltonian(n_sector, 0.0, true), dim_r_);
  }

  std::vector<double> sample_times(double sample_dt_ns) const {
    std::vector<double> t{0.0};
    const double dt = sample_dt_ns * 1e-3;
    while (t.back() + dt < total_us_ - 1e-12) t.push_back(t.back() + dt);
    t.push_back(total_us_);
    return t;
  }

  double window_us() const { return frame_.window_us(); }
  double total_us() const { return total_us_; }
  int dim_r() const { return dim_r_; }
  int qubit_levels() const { return params_.qubit_levels; }
  bool in_window(double t) const { return t < window_us() - 1e-12; }

  /// cb(sample_index, t_us, block_state, basis_rotation_if_in_window)
  template <class Cb>
  void run(Matrix x, const SectorBlock& blk, int rotation_sector,
           const std::vector<double>& times, const Cb& cb) const {
    const Matrix bc = rotation(blk, rotation_sector);
    x = bc * x * bc.adjoint();
    double t = 0.0;
    bool rotated_back = false;
    for (size_t k = 0; k < times.size(); ++k) {
      const double t_next = times[k];
      if (t_next > t) {
        if (!rotated_back && t_next >= window_us() - 1e-12) {
          x = blk.evolve(std::move(x), t, window_us() - t, true);
          x = bc.adjoint() * x * bc;
          rotated_back = true;
          t = window_us();
          if (t_next > t + 1e-12) x = blk.evolve(std::move(x), t, t_next - t, false);
        } else {
          x = blk.evolve(std::move(x), t, t_next - t, !rotated_back);
        }
        t = t_next;
      }
      cb(k, t, x, rotated_back ? nullptr : &bc);
    }
    if (blk.top_level_population(x) > 1e-3)
      throw std::runtime_error("reset: displaced resonator truncation insufficient");
  }

 private:
  ResetDriveParams params_;
  DeviceParams device_;
  int dim_r_;
  double total_us_;
  DriveFrame frame_;
};

double ground_population(const Matrix& qubit_rho, const Matrix* rotation_full, int dim_r) {
  if (rotation_full == nullptr) return qubit_rho(0, 0).real();
  // inside the drive window: the population the final basis change would give
  const int dq = static_cast<int>(qubit_rho.rows());
  Matrix u = Matrix::Zero(dq, dq);
  for (int i = 0; i < dq; ++i)
    for (int j = 0; j < dq; ++j) u(i, j) = (*rotation_full)(i * dim_r, j * dim_r);
  Matrix back = u.adjoint() * qubit_rho * u;
  return back(0, 0).real();
}

std::vector<int> cavity_support(const Vector& amplitudes) {
  std::vector<int> support;
  for (int n = 0; n < amplitudes.size(); ++n)
    if (std::norm(amplitudes(n)) > 1e-12) support.push_back(n);
  if (support.empty()) throw std::invalid_argument("reset: empty cavity state");
  return support;
}

}  // namespace

double ResetDriveParams::resolved_delta_q_mhz(const DeviceParams& dev) const {
  if (delta_q_mhz) return *delta_q_mhz;
  const double xi2 = std::norm(steady_xi(*this, dev));
  return dev.chi_qr_mhz * xi2 + delta_qc_mhz;
}

EffectiveResetModel effective_model(const ResetDriveParams& params,
                                    const DeviceParams& device) {
  EffectiveResetModel m;
  m.xi_r = steady_xi(params, device);
  const double chi_qr = mhz_to_angular(device.chi_qr_mhz);
  const double chi_qc = mhz_to_angular(device.chi_qc_mhz);
  const double rabi = mhz_to_angular(params.rabi_mhz);
  const double kappa = device.kappa_r();
  const double xi = std::abs(m.xi_r);
  m.gamma_eff = chi_qr * chi_qr * xi * xi / kappa;
  m.dephasing_coeff = rabi > 0 ? chi_qc * chi_qr * xi / (2 * rabi * std::sqrt(kappa)) : 0.0;
  m.rabi_ratio = chi_qc > 0 ? rabi / chi_qc : std::numeric_limits<double>::infinity();
  m.strong_rabi_ok = m.rabi_ratio > 20.0;
  m.coupling_ratio = chi_qr * xi / kappa;
  m.weak_coupling_ok = m.coupling_ratio < 0.2;
  return m;
}

double resonant_delta_r_mhz(const ResetDriveParams& base, const DeviceParams& device) {
  // coarse: minimize the residual bright-state population under constant
  // drives around the dressed-splitting estimate
  ResetDriveParams probe = base;
  probe.qubit_levels = 2;
  probe.start_displaced = true;
  probe.include_qubit_decoherence = false;
  auto residual_at = [&](double dr) {
    probe.delta_r_mhz = dr;
    auto d = dressed_decay(probe, device, 0.45, 6);
    return d.p_plus.back();
  };
  const double xi2 = std::norm(steady_xi(base, device));
  const double dq_eff = base.resolved_delta_q_mhz(device) - device.chi_qr_mhz * xi2;
  double guess = std::sqrt(base.rabi_mhz * base.rabi_mhz + dq_eff * dq_eff) +
                 0.5 * device.chi_qr_mhz;
  double best = guess, best_res = residual_at(guess);
  const double step = 0.4;
  const double r_lo = residual_at(guess - step);
  const double r_hi = residual_at(guess + step);
  const double denom = r_lo - 2 * best_res + r_hi;
  if (std::abs(denom) > 1e-12) {
    double shift = std::clamp(0.5 * step * (r_lo - r_hi) / denom, -2.0, 2.0);
    const double cand = guess + shift;
    const double rc = residual_at(cand);
    if (rc < best_res) {
      best = cand;
      best_res = rc;
    }
  }
  if (r_lo < best_res && r_lo < r_hi) best = guess - step;
  if (r_hi < best_res && r_hi < r_lo) best = guess + step;
  return best;
}

namespace {

/// End-of-sequence ground population from |e>, the calibration signal the
/// experiment optimizes over the drive detunings.
double reset_quality(const ResetDriveParams& p, const DeviceParams& device) {
  Vector vac = Vector::Zero(1);
  vac(0) = 1.0;
  auto scan = reset_hold_scan(p, device, {p.hold_ns}, vac);
  return scan.p_g_end_from_e[0];
}

}  // namespace

ResetDriveParams paper_operating_point(const DeviceParams& device, bool refine_resonance) {
  ResetDriveParams p;
  p.rabi_mhz = 40.0;
  p.epsilon_r_mhz = 80.0;
  p.delta_q_mhz = 12.4;
  p.delta_r_mhz = 41.5;
  p.ramp_ns = 190.0;
  p.hold_ns = 190.0;
  p.post_wait_ns = 400.0;
  if (!refine_resonance) return p;
  p.delta_r_mhz = resonant_delta_r_mhz(p, device);
  // fine calibration against the actual sequence, as done on hardware
  ResetDriveParams probe = p;
  probe.hold_ns = 240.0;
  double best_dr = p.delta_r_mhz, best_q = -1;
  for (double dr : {p.delta_r_mhz, p.delta_r_mhz + 0.25, p.delta_r_mhz + 0.5}) {
    probe.delta_r_mhz = dr;
    const double q = reset_quality(probe, device);
    if (q > best_q) {
      best_q = q;
      best_dr = dr;
    }
  }
  p.delta_r_mhz = best_dr;
  return p;
}

ResetTimeSeries simulate_reset(const ResetDriveParams& params, const DeviceParams& device,
                               const Vector& cavity_amplitudes, double sample_dt_ns) {
  ResetSequence seq(params, device);
  const auto support = cavity_support(cavity_amplitudes);
  const auto times = seq.sample_times(sample_dt_ns);
  const int n_samples = static_cast<int>(times.size());

  struct PairJob {
    int n_left, n_right;
  };
  std::vector<PairJob> jobs;
  for (size_t i = 0; i < support.size(); ++i)
    for (size_t j = i; j < support.size(); ++j) jobs.push_back({support[i], support[j]});

  // per-job, per-sample quantities for both initial ancilla states
  std::vector<std::vector<Matrix>> qblk_g(jobs.size()), qblk_e(jobs.size());
  std::vector<std::vector<double>> pg_g(jobs.size()), pg_e(jobs.size()), nres_e(jobs.size());

  parallel_for(static_cast<int>(jobs.size()), [&](int ji) {
    auto [nl, nr] = jobs[ji];
    auto blk = seq.block(nl, nr);
    qblk_g[ji].resize(n_samples);
    qblk_e[ji].resize(n_samples);
    pg_g[ji].assign(n_samples, 0.0);
    pg_e[ji].assign(n_samples, 0.0);
    nres_e[ji].assign(n_samples, 0.0);
    for (int init = 0; init < 2; ++init) {
      auto& slot = init == 0 ? qblk_g[ji] : qblk_e[ji];
      auto& pg = init == 0 ? pg_g[ji] : pg_e[ji];
      seq.run(seq.initial_block(init), blk, nl, times,
              [&](size_t k, double t_us, const Matrix& x, const Matrix* rot) {
                slot[k] = blk.qubit_reduced(x);
                pg[k] = ground_population(slot[k], rot, seq.dim_r());
                if (init == 1 && nl == nr) nres_e[ji][k] = blk.resonator_photons(x, t_us);
              });
    }
  });

  ResetTimeSeries ts;
  ts.t_ns.resize(n_samples);
  ts.p_g_from_g.assign(n_samples, 0.0);
  ts.p_g_from_e.assign(n_samples, 0.0);
  ts.purity.assign(n_samples, 0.0);
  ts.n_res_from_e.assign(n_samples, 0.0);
  for (int k = 0; k < n_samples; ++k) {
    ts.t_ns[k] = times[k] * 1e3;
    for (size_t ji = 0; ji < jobs.size(); ++ji) {
      auto [nl, nr] = jobs[ji];
      if (nl == nr) {
        const double w = std::norm(cavity_amplitudes(nl));
        ts.p_g_from_g[k] += w * pg_g[ji][k];
        ts.p_g_from_e[k] += w * pg_e[ji][k];
        ts.n_res_from_e[k] += w * nres_e[ji][k];
      }
      const double w2 = std::norm(cavity_amplitudes(nl)) * std::norm(cavity_amplitudes(nr));
      const Matrix mixed = 0.5 * (qblk_g[ji][k] + qblk_e[ji][k]);
      const double term = w2 * (mixed * mixed.adjoint()).trace().real();
      ts.purity[k] += (nl == nr) ? term : 2 * term;
    }
  }
  return ts;
}

ResetHoldScan reset_hold_scan(const ResetDriveParams& params, const DeviceParams& device,
                              const std::vector<double>& holds_ns,
                              const Vector& cavity_amplitudes) {
  ResetHoldScan scan;
  scan.hold_ns = holds_ns;
  scan.p_g_end_from_g.assign(holds_ns.size(), 0.0);
  scan.p_g_end_from_e.assign(holds_ns.size(), 0.0);
  const auto support = cavity_support(cavity_amplitudes);

  struct Job {
    int sector, init;
  };
  std::vector<Job> jobs;
  for (int s : support)
    for (int init = 0; init < 2; ++init) jobs.push_back({s, init});

  std::vector<std::vector<double>> partial(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int ji) {
    auto [sector, init] = jobs[ji];
    partial[ji].assign(holds_ns.size(), 0.0);
    for (size_t h = 0; h < holds_ns.size(); ++h) {
      ResetDriveParams p = params;
      p.hold_ns = holds_ns[h];
      ResetSequence seq(p, device);
      auto blk = seq.block(sector, sector);
      std::vector<double> end_time{seq.total_us()};
      seq.run(seq.initial_block(init), blk, sector, end_time,
              [&](size_t, double, const Matrix& x, const Matrix*) {
                partial[ji][h] = blk.qubit_reduced(x)(0, 0).real();
              });
    }
  });
  for (size_t ji = 0; ji < jobs.size(); ++ji) {
    const double w = std::norm(cavity_amplitudes(jobs[ji].sector));
    auto& out = jobs[ji].init == 0 ? scan.p_g_end_from_g : scan.p_g_end_from_e;
    for (size_t h = 0; h < holds_ns.size(); ++h) out[h] += w * partial[ji][h];
  }
  return scan;
}

DressedDecayResult dressed_decay(const ResetDriveParams& params, const DeviceParams& device,
                                 double duration_us, int samples) {
  // constant drives; the bright dressed state relaxes into the dark one
  ResetDriveParams p = params;
  p.ramp_ns = 0.0;
  p.hold_ns = duration_us * 1e3;
  p.post_wait_ns = 0.0;
  p.start_displaced = true;
  p.include_qubit_decoherence = false;

  ResetSequence seq(p, device);
  auto blk = seq.block(0, 0);
  const int dim_r = seq.dim_r();
  // bright state = image of |e> under the dressed-basis rotation
  const Matrix rot = seq.rotation(blk, 0);
  Vector bright = rot.col(1 * dim_r);
  Matrix x = bright * bright.adjoint();
  Matrix proj = x;

  DressedDecayResult res;
  const double dt = duration_us / samples;
  double t = 0;
  res.t_us.push_back(0.0);
  res.p_plus.push_back(1.0);
  for (int k = 0; k < samples; ++k) {
    x = blk.evolve(std::move(x), t, dt, true);
    t += dt;
    res.t_us.push_back(t);
    res.p_plus.push_back((proj * x).trace().real());
  }

  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < res.t_us.size(); ++i) pts.push_back({res.t_us[i], res.p_plus[i]});
  auto fit = fit_exponential(pts, 0.0);
  res.fitted_rate = 1.0 / fit.tau;
  return res;
}

double ResetPhaseTable::phase(int n, bool from_excited) const {
  const auto& tab = from_excited ? phase_e : phase_g;
  if (n == 0) return 0.0;
  if (n <= static_cast<int>(tab.size())) return tab[n - 1];
  return (from_excited ? slope_e : slope_g) * n + (from_excited ? intercept_e : intercept_g);
}

ResetPhaseTable ResetPhaseTable::zero() { return ResetPhaseTable{}; }

ResetPhaseTable calibrate_reset_phases(const ResetDriveParams& params,
                                       const DeviceParams& device, int n_max) {
  if (n_max < 1) throw std::invalid_argument("calibrate_reset_phases: n_max >= 1");
  ResetPhaseTable table;
  table.phase_g.assign(n_max, 0.0);
  table.phase_e.assign(n_max, 0.0);

  struct Job {
    int n, init;
  };
  std::vector<Job> jobs;
  for (int n = 1; n <= n_max; ++n)
    for (int init = 0; init < 2; ++init) jobs.push_back({n, init});

  std::vector<double> phases(jobs.size(), 0.0);
  parallel_for(static_cast<int>(jobs.size()), [&](int ji) {
    auto [n, init] = jobs[ji];
    ResetSequence seq(params, device);
    auto blk = seq.block(n, 0);
    std::vector<double> end_time{seq.total_us()};

    cplx with_reset;
    seq.run(seq.initial_block(init), blk, 0, end_time,
            [&](size_t, double, const Matrix& x, const Matrix*) { with_reset = x.trace(); });

    // baseline: same duration, no pulses at all
    Matrix xb = blk.evolve(seq.initial_block(init), 0.0, seq.total_us(), false);
    const cplx baseline = xb.trace();

    if (std::abs(with_reset) < 0.1)
      throw std::runtime_error("calibrate_reset_phases: contrast below 0.1 for N = " +
                               std::to_string(n));
    phases[ji] = std::remainder(std::arg(with_reset) - std::arg(baseline),
                                2 * std::numbers::pi);
  });
  for (size_t ji = 0; ji < jobs.size(); ++ji) {
    if (jobs[ji].init == 0)
      table.phase_g[jobs[ji].n - 1] = phases[ji];
    else
      table.phase_e[jobs[ji].n - 1] = phases[ji];
  }

  auto line_fit = [](const std::vector<double>& ph, double& slope, double& intercept,
                     double& resid) {
    const int n = static_cast<int>(ph.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double x = i + 1;
      sx += x;
      sy += ph[i];
      sxx += x * x;
      sxy += x * ph[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
    resid = 0;
    for (int i = 0; i < n; ++i)
      resid = std::max(resid, std::abs(ph[i] - (slope * (i + 1) + intercept)));
  };
  if (n_max >= 2) {
    line_fit(table.phase_g, table.slope_g, table.intercept_g, table.fit_residual_g);
    line_fit(table.phase_e, table.slope_e, table.intercept_e, table.fit_residual_e);
  } else {
    table.slope_g = table.phase_g[0];
    table.slope_e = table.phase_e[0];
  }
  return table;
}

Channel reset_channel(const HilbertSpec& spec, const ResetPhaseTable& table,
                      const std::optional<ResetErrorModel>& error) {
  if (spec.qubit_dim != 2 || spec.resonator_dim != 1)
    throw std::invalid_argument("reset_channel acts on cavity (x) qubit");
  const int dc = spec.cavity_dim;
  const int dim = spec.total();
  Matrix k_g = Matrix::Zero(dim, dim);
  Matrix k_e = Matrix::Zero(dim, dim);
  for (int n = 0; n < dc; ++n) {
    const int ig = n * 2 + 0, ie = n * 2 + 1;
    k_g(ig, ig) = std::exp(cplx(0, table.phase(n, false)));
    k_e(ig, ie) = std::exp(cplx(0, table.phase(n, true)));
  }
  if (!error) return Channel::from_kraus({k_g, k_e});

  // e-branch error: logical depolarization with probability p such that the
  // process fidelity drops by the configured bound (dF = 3p/4).
  const double p = std::min(1.0, error->fidelity_loss_from_e * 4.0 / 3.0);
  std::vector<Matrix> kraus;
  kraus.push_back(k_g);
  kraus.push_back(std::sqrt(1.0 - p) * k_e);
  for (const auto& lp : error->logical_paulis)
    kraus.push_back(std::sqrt(p / error->logical_paulis.size()) * (lp * k_e));
  return Channel::from_kraus(kraus);
}

}  // namespace aqec

#include "aqec/grape.hpp"

#include "aqec/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

struct Propagation {
  HilbertSpec spec;
  Matrix h0;
  std::array<Matrix, 4> control_ops;

  Propagation(int cavity_dim, const DeviceParams& device) {
    spec = HilbertSpec{cavity_dim, 2, 1};
    h0 = system_hamiltonian(device, spec, FrameChoice::DispersiveTwoLevel).mat;
    auto ops = build_operators(spec);
    control_ops[0] = ops.sx;
    control_ops[1] = ops.sy;
    control_ops[2] = ops.a_c.adjoint() + ops.a_c;
    control_ops[3] = cplx(0, 1) * (ops.a_c.adjoint() - ops.a_c);
  }

  Matrix step_hamiltonian(const PulseSchedule& s, int j) const {
    Matrix h = h0;
    for (int ch = 0; ch < 4; ++ch)
      h += mhz_to_angular(s.channels[ch][j]) * control_ops[ch];
    return h;
  }
};

int infer_cavity_dim(const TransferTarget& target) {
  if (target.cavity_dim > 0) return target.cavity_dim;
  return static_cast<int>(target.inputs.at(0).size()) / 2;
}

}  // namespace

double grape_fidelity(const PulseSchedule& schedule, const TransferTarget& target,
                      const DeviceParams& device) {
  target.validate();
  Propagation prop(infer_cavity_dim(target), device);
  const double dt_us = schedule.dt_ns * 1e-3;
  const int n_pairs = static_cast<int>(target.inputs.size());

  std::vector<Vector> psi = target.inputs;
  for (int j = 0; j < schedule.steps(); ++j) {
    const Matrix u = expm_hermitian(prop.step_hamiltonian(schedule, j), cplx(0, -dt_us));
    for (auto& p : psi) p = u * p;
  }
  cplx overlap = 0;
  for (int i = 0; i < n_pairs; ++i) overlap += target.outputs[i].dot(psi[i]);
  return std::norm(overlap) / (double(n_pairs) * n_pairs);
}

std::array<std::vector<double>, 4> grape_gradient(const PulseSchedule& schedule,
                                                  const TransferTarget& target,
                                                  const DeviceParams& device) {
  target.validate();
  Propagation prop(infer_cavity_dim(target), device);
  const double dt_us = schedule.dt_ns * 1e-3;
  const int steps = schedule.steps();
  const int n_pairs = static_cast<int>(target.inputs.size());

  // forward states before each step, backward costates after each step
  std::vector<std::vector<Vector>> fwd(steps + 1);
  fwd[0] = target.inputs;
  std::vector<Matrix> us(steps);
  std::vector<Matrix> hs(steps);
  for (int j = 0; j < steps; ++j) {
    hs[j] = prop.step_hamiltonian(schedule, j);
    us[j] = expm_hermitian(hs[j], cplx(0, -dt_us));
    fwd[j + 1].resize(n_pairs);
    for (int i = 0; i < n_pairs; ++i) fwd[j + 1][i] = us[j] * fwd[j][i];
  }
  cplx overlap = 0;
  for (int i = 0; i < n_pairs; ++i) overlap += target.outputs[i].dot(fwd[steps][i]);

  std::vector<std::vector<Vector>> bwd(steps + 1);
  bwd[steps] = target.outputs;
  for (int j = steps - 1; j >= 0; --j) {
    bwd[j].resize(n_pairs);
    for (int i = 0; i < n_pairs; ++i) bwd[j][i] = us[j].adjoint() * bwd[j + 1][i];
  }

  std::array<std::vector<double>, 4> grad;
  for (auto& g : grad) g.assign(steps, 0.0);
  const double norm = 2.0 / (double(n_pairs) * n_pairs);

  parallel_for(steps, [&](int j) {
    Matrix u, du;
    for (int ch = 0; ch < 4; ++ch) {
      // d/du of exp(-i dt (H + 2pi u B)) in the direction 2pi B
      expm_hermitian_derivative(hs[j], kTwoPi * prop.control_ops[ch], dt_us, u, du);
      cplx dsum = 0;
      for (int i = 0; i < n_pairs; ++i) dsum += bwd[j + 1][i].dot(du * fwd[j][i]);
      grad[ch][j] = norm * std::real(std::conj(overlap) * dsum);
    }
  });
  return grad;
}

Matrix schedule_propagator(const PulseSchedule& schedule, const TransferTarget& target,
                           const DeviceParams& device) {
  Propagation prop(infer_cavity_dim(target), device);
  const double dt_us = schedule.dt_ns * 1e-3;
  Matrix u = Matrix::Identity(prop.spec.total(), prop.spec.total());
  for (int j = 0; j < schedule.steps(); ++j)
    u = expm_hermitian(prop.step_hamiltonian(schedule, j), cplx(0, -dt_us)) * u;
  return u;
}

PulseSchedule grape_optimize(const TransferTarget& target, const DeviceParams& device,
                             const GrapeOptions& opts, GrapeReport* report) {
  target.validate();

  PulseSchedule schedule;
  schedule.dt_ns = opts.dt_ns;
  schedule.amplitude_cap_mhz = opts.amplitude_cap_mhz;
  const int steps = static_cast<int>(std::round(opts.duration_ns / opts.dt_ns));
  for (auto& ch : schedule.channels) ch.assign(steps, 0.0);

  schedule.form = opts.form;
  int n_params_per_channel = steps;
  if (opts.form == PulseForm::Fourier) {
    schedule.delta_f_mhz =
        opts.delta_f_mhz > 0 ? opts.delta_f_mhz : 1e3 / opts.duration_ns;
    int modes = opts.modes > 0
                    ? opts.modes
                    : static_cast<int>(std::floor(opts.band_limit_mhz / schedule.delta_f_mhz));
    schedule.modes = std::min(modes, steps / 2 - 1);
    n_params_per_channel = 2 * schedule.modes + 1;
  }

  // band-limited random start, fixed seed
  Rng rng(opts.seed);
  RealVector x(4 * n_params_per_channel);
  for (int i = 0; i < x.size(); ++i) x(i) = rng.normal(0.0, opts.init_amplitude_mhz);

  // precompute the Fourier synthesis basis (midpoint sampling)
  Eigen::MatrixXd basis;
  if (opts.form == PulseForm::Fourier) {
    basis.resize(steps, n_params_per_channel);
    for (int j = 0; j < steps; ++j) {
      const double t_us = (j + 0.5) * opts.dt_ns * 1e-3;
      basis(j, 0) = opts.transfer(0.0);
      for (int k = 1; k <= schedule.modes; ++k) {
        const double f = k * schedule.delta_f_mhz;
        const double phase = kTwoPi * f * t_us;
        basis(j, 2 * k - 1) = opts.transfer(f) * std::cos(phase);
        basis(j, 2 * k) = opts.transfer(f) * std::sin(phase);
      }
    }
  }

  auto apply_params = [&](const RealVector& p) {
    if (opts.form == PulseForm::Fourier) {
      for (int ch = 0; ch < 4; ++ch) {
        schedule.coefficients[ch] = p.segment(ch * n_params_per_channel, n_params_per_channel);
        Eigen::VectorXd samples = basis * schedule.coefficients[ch];
        schedule.channels[ch].assign(samples.data(), samples.data() + steps);
      }
    } else {
      for (int ch = 0; ch < 4; ++ch) {
        const auto seg = p.segment(ch * steps, steps);
        schedule.channels[ch].assign(seg.data(), seg.data() + steps);
      }
    }
  };

  GrapeReport local_report;
  double last_fidelity = 0.0;
  auto objective = [&](const RealVector& p, RealVector& g) {
    apply_params(p);
    const double fid = grape_fidelity(schedule, target, device);
    last_fidelity = fid;
    auto grad_samples = grape_gradient(schedule, target, device);

    // amplitude-cap hinge penalty
    double penalty = 0.0;
    std::array<std::vector<double>, 4> pen_grad;
    for (int ch = 0; ch < 4; ++ch) {
      pen_grad[ch].assign(steps, 0.0);
      for (int j = 0; j < steps; ++j) {
        const double v = schedule.channels[ch][j];
        const double excess = std::abs(v) - opts.amplitude_cap_mhz;
        if (excess > 0) {
          penalty += opts.cap_penalty_weight * excess * excess / steps;
          pen_grad[ch][j] =
              2.0 * opts.cap_penalty_weight * excess / steps * (v > 0 ? 1.0 : -1.0);
        }
      }
    }

    g.resize(p.size());
    for (int ch = 0; ch < 4; ++ch) {
      Eigen::VectorXd gs(steps);
      for (int j = 0; j < steps; ++j) gs(j) = -grad_samples[ch][j] + pen_grad[ch][j];
      if (opts.form == PulseForm::Fourier)
        g.segment(ch * n_params_per_channel, n_params_per_channel) = basis.transpose() * gs;
      else
        g.segment(ch * steps, steps) = gs;
    }
    return 1.0 - fid + penalty;
  };

  LbfgsOptions lopts;
  lopts.max_iterations = opts.max_iterations;
  lopts.objective_tolerance = opts.target_infidelity;
  lopts.on_iteration = [&](int, double) {
    local_report.fidelity_per_iteration.push_back(last_fidelity);
  };
  lbfgs_minimize(x, objective, lopts);

  apply_params(x);
  local_report.final_fidelity = grape_fidelity(schedule, target, device);
  local_report.iterations = static_cast<int>(local_report.fidelity_per_iteration.size());
  local_report.converged = local_report.final_fidelity >= 1.0 - opts.target_infidelity;
  if (report) *report = local_report;
  return schedule;
}

TransferTarget make_aqec_target(const CodeSpec& code, double theta,
                                const ResetPhaseTable& phase_table,
                                const RealVector& idle_phases) {
  if (code.error_subspaces.empty())
    throw std::invalid_argument("make_aqec_target: code has no error subspace");
  if (!(theta > 0 && theta <= std::atan(1.0) + 1e-12))
    throw std::invalid_argument("make_aqec_target: theta outside (0, pi/4]");
  const int dc = code.dim;
  HilbertSpec spec{dc, 2, 1};

  // no-jump distortion exp(-kappa t n/2) with tan(theta) = exp(-2 kappa t);
  // deterministic idle phases decorate every input component
  const double kt = -std::log(std::tan(theta)) / 2.0;
  Vector idle_phase_factor(dc), distort(dc);
  for (int n = 0; n < dc; ++n) {
    const double phi = idle_phases.size() > n ? idle_phases(n) : 0.0;
    idle_phase_factor(n) = std::exp(cplx(0, phi));
    distort(n) = std::exp(-0.5 * kt * n) * idle_phase_factor(n);
  }
  auto precompensated = [&](const Vector& v, bool from_excited) {
    Vector w(dc);
    for (int n = 0; n < dc; ++n)
      w(n) = v(n) * std::exp(cplx(0, -phase_table.phase(n, from_excited)));
    return w;
  };

  std::vector<Vector> ins, outs;
  for (int i = 0; i < 2; ++i) {
    Vector v = distort.asDiagonal() * code.logical(i);
    ins.push_back(lift_cavity(spec, Vector(v / v.norm()), 0).amplitudes);
    outs.push_back(lift_cavity(spec, precompensated(code.logical(i), false), 0).amplitudes);
  }
  const auto& [e0, e1] = code.error_subspaces.front();
  const Vector errs[2] = {e0, e1};
  for (int i = 0; i < 2; ++i) {
    Vector v = idle_phase_factor.asDiagonal() * errs[i];
    ins.push_back(lift_cavity(spec, Vector(v / v.norm()), 0).amplitudes);
    outs.push_back(lift_cavity(spec, precompensated(code.logical(i), true), 1).amplitudes);
  }

  // the distorted code space is generally not exactly orthogonal to the
  // error space (visible for the sqrt17 code); orthonormalize the inputs in
  // a fixed order so one unitary can realize the map
  for (size_t i = 0; i < ins.size(); ++i) {
    for (size_t j = 0; j < i; ++j) ins[i] -= ins[j].dot(ins[i]) * ins[j];
    const double n = ins[i].norm();
    if (n < 0.8)
      throw std::invalid_argument("make_aqec_target: overlapping input spans");
    ins[i] /= n;
  }

  TransferTarget target;
  target.cavity_dim = dc;
  target.inputs = std::move(ins);
  target.outputs = std::move(outs);
  target.validate();
  return target;
}

TransferTarget make_encode_target(const CodeSpec& code) {
  HilbertSpec spec{code.dim, 2, 1};
  TransferTarget target;
  target.cavity_dim = code.dim;
  Vector vac = Vector::Zero(code.dim);
  vac(0) = 1.0;
  target.inputs.push_back(lift_cavity(spec, vac, 0).amplitudes);
  target.inputs.push_back(lift_cavity(spec, vac, 1).amplitudes);
  target.outputs.push_back(lift_cavity(spec, code.logical_zero, 0).amplitudes);
  target.outputs.push_back(lift_cavity(spec, code.logical_one, 0).amplitudes);
  target.validate();
  return target;
}

Matrix ideal_recovery_unitary(const TransferTarget& target) {
  target.validate();
  const int dim = static_cast<int>(target.inputs[0].size());
  const int k = static_cast<int>(target.inputs.size());

  // complete both input and output frames deterministically
  auto complete = [&](const std::vector<Vector>& frame) {
    std::vector<Vector> full = frame;
    for (int cand = 0; cand < dim && static_cast<int>(full.size()) < dim; ++cand) {
      Vector v = Vector::Zero(dim);
      v(cand) = 1.0;
      for (const auto& u : full) v -= u.dot(v) * u;
      const double n = v.norm();
      if (n > 1e-8) full.push_back(v / n);
    }
    if (static_cast<int>(full.size()) != dim)
      throw std::runtime_error("ideal_recovery_unitary: frame completion failed");
    return full;
  };
  auto in_full = complete(target.inputs);
  auto out_full = complete(target.outputs);

  Matrix u = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) u += out_full[i] * in_full[i].adjoint();
  (void)k;
  return u;
}

}  // namespace aqec

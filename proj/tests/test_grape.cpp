#include <doctest.h>

#include "aqec/grape.hpp"
#include "aqec/hamiltonian.hpp"

#include <random>

using namespace aqec;

namespace {

TransferTarget identity_pairs(int cavity_dim) {
  HilbertSpec spec{cavity_dim, 2, 1};
  TransferTarget t;
  t.cavity_dim = cavity_dim;
  for (int i = 0; i < 2; ++i) {
    auto v = basis_state(spec, i, 0).amplitudes;
    t.inputs.push_back(v);
    t.outputs.push_back(v);
  }
  return t;
}

PulseSchedule random_schedule(int steps, double dt_ns, double amp, std::uint64_t seed) {
  PulseSchedule s;
  s.dt_ns = dt_ns;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, amp);
  for (auto& ch : s.channels) {
    ch.resize(steps);
    for (auto& v : ch) v = nd(gen);
  }
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("grape");

TEST_CASE("zero-duration schedule on identity pairs has unit fidelity") {
  auto target = identity_pairs(4);
  PulseSchedule s;
  s.dt_ns = 2.0;
  CHECK(grape_fidelity(s, target, device_table_defaults()) == doctest::Approx(1.0));
}

TEST_CASE("random schedule against a random orthogonal target stays below 1") {
  HilbertSpec spec{4, 2, 1};
  TransferTarget t;
  t.cavity_dim = 4;
  t.inputs.push_back(basis_state(spec, 0, 0).amplitudes);
  t.inputs.push_back(basis_state(spec, 1, 0).amplitudes);
  t.outputs.push_back(basis_state(spec, 2, 1).amplitudes);
  t.outputs.push_back(basis_state(spec, 3, 1).amplitudes);
  auto s = random_schedule(40, 4.0, 0.5, 77);
  const double f = grape_fidelity(s, t, device_table_defaults());
  CHECK(f >= 0.0);
  CHECK(f < 0.9);
}

TEST_CASE("analytic gradient matches central finite differences") {
  auto device = device_table_defaults();
  auto target = identity_pairs(4);
  target.outputs[0] = basis_state(HilbertSpec{4, 2, 1}, 0, 1).amplitudes;
  target.outputs[1] = basis_state(HilbertSpec{4, 2, 1}, 1, 1).amplitudes;

  SUBCASE("all-zero controls") {
    auto s = random_schedule(25, 4.0, 0.0, 1);
    auto grad = grape_gradient(s, target, device);
    const double h = 1e-6;
    for (int ch = 0; ch < 4; ++ch) {
      for (int j : {0, 7, 19}) {
        auto sp = s, sm = s;
        sp.channels[ch][j] += h;
        sm.channels[ch][j] -= h;
        const double fd = (grape_fidelity(sp, target, device) -
                           grape_fidelity(sm, target, device)) /
                          (2 * h);
        CHECK(grad[ch][j] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
  SUBCASE("random controls, random parameter sample") {
    auto s = random_schedule(25, 4.0, 1.2, 42);
    auto grad = grape_gradient(s, target, device);
    std::mt19937_64 gen(5);
    const double h = 1e-6;
    double worst = 0;
    for (int trial = 0; trial < 12; ++trial) {
      const int ch = static_cast<int>(gen() % 4);
      const int j = static_cast<int>(gen() % 25);
      auto sp = s, sm = s;
      sp.channels[ch][j] += h;
      sm.channels[ch][j] -= h;
      const double fd = (grape_fidelity(sp, target, device) -
                         grape_fidelity(sm, target, device)) /
                        (2 * h);
      const double scale = std::max(std::abs(fd), 1e-8);
      worst = std::max(worst, std::abs(grad[ch][j] - fd) / scale);
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("fidelity is invariant under a global output phase") {
  auto device = device_table_defaults();
  auto target = identity_pairs(4);
  auto s = random_schedule(30, 4.0, 0.8, 9);
  const double f0 = grape_fidelity(s, target, device);
  auto rotated = target;
  const cplx phase = std::exp(cplx(0, 0.7));
  for (auto& o : rotated.outputs) o *= phase;
  const double f1 = grape_fidelity(s, rotated, device);
  CHECK(f0 == doctest::Approx(f1).epsilon(1e-12));
  // derivative of fidelity with respect to the phase parameter vanishes
  const double h = 1e-5;
  auto plus = target, minus = target;
  for (auto& o : plus.outputs) o *= std::exp(cplx(0, h));
  for (auto& o : minus.outputs) o *= std::exp(cplx(0, -h));
  const double dfdgamma =
      (grape_fidelity(s, plus, device) - grape_fidelity(s, minus, device)) / (2 * h);
  CHECK(std::abs(dfdgamma) < 1e-9);
}

TEST_CASE("gradient is consistent under step refinement") {
  auto device = device_table_defaults();
  auto target = identity_pairs(4);
  target.outputs[0] = basis_state(HilbertSpec{4, 2, 1}, 0, 1).amplitudes;
  target.outputs[1] = basis_state(HilbertSpec{4, 2, 1}, 1, 1).amplitudes;
  // constant envelopes represented with dt and dt/2
  PulseSchedule coarse;
  coarse.dt_ns = 8.0;
  for (auto& ch : coarse.channels) ch.assign(10, 0.3);
  PulseSchedule fine;
  fine.dt_ns = 4.0;
  for (auto& ch : fine.channels) ch.assign(20, 0.3);
  auto gc = grape_gradient(coarse, target, device);
  auto gf = grape_gradient(fine, target, device);
  // the response to a constant shift of a whole channel must agree
  for (int ch = 0; ch < 4; ++ch) {
    double sum_c = 0, sum_f = 0;
    for (double v : gc[ch]) sum_c += v;
    for (double v : gf[ch]) sum_f += v;
    CHECK(sum_c == doctest::Approx(sum_f).epsilon(5e-3));
  }
}

TEST_CASE("fourier round trip reproduces coefficients") {
  PulseSchedule s;
  s.dt_ns = 2.0;
  s.form = PulseForm::Fourier;
  s.delta_f_mhz = 0.5;
  s.modes = 6;
  for (auto& ch : s.channels) ch.assign(500, 0.0);
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int ch = 0; ch < 4; ++ch) {
    s.coefficients[ch].resize(13);
    for (int i = 0; i < 13; ++i) s.coefficients[ch](i) = nd(gen);
  }
  s.synthesize();
  for (int ch = 0; ch < 4; ++ch) {
    RealVector back = PulseSchedule::project_fourier(s.channels[ch], s.dt_ns, 0.5, 6);
    CHECK((back - s.coefficients[ch]).cwiseAbs().maxCoeff() < 1e-10);
  }
  // synthesis is exact and reproducible
  auto samples = s.channels;
  s.synthesize();
  for (int ch = 0; ch < 4; ++ch)
    for (int j = 0; j < 500; ++j) CHECK(std::abs(samples[ch][j] - s.channels[ch][j]) < 1e-12);
}

TEST_CASE("transfer-function hook scales the synthesized band") {
  PulseSchedule s;
  s.dt_ns = 2.0;
  s.form = PulseForm::Fourier;
  s.delta_f_mhz = 1.0;
  s.modes = 2;
  for (auto& ch : s.channels) ch.assign(100, 0.0);
  for (int ch = 0; ch < 4; ++ch) {
    s.coefficients[ch] = RealVector::Zero(5);
    s.coefficients[ch](1) = 1.0;  // pure cos at 1 MHz
  }
  s.synthesize([](double f) { return 1.0 / (1.0 + f); });
  CHECK(std::abs(s.channels[0][0]) < 0.51);  // scaled by 1/2 at 1 MHz
  CHECK(std::abs(s.channels[0][0]) > 0.45);
}

TEST_CASE("schedule json round trip") {
  auto s = random_schedule(20, 2.0, 1.0, 11);
  auto text = s.to_json();
  auto back = PulseSchedule::from_json(text);
  CHECK(back.dt_ns == s.dt_ns);
  for (int ch = 0; ch < 4; ++ch)
    for (int j = 0; j < 20; ++j)
      CHECK(back.channels[ch][j] == doctest::Approx(s.channels[ch][j]).epsilon(1e-12));
}

TEST_CASE("propagators are unitary at acceptance step size") {
  auto device = device_table_defaults();
  auto target = identity_pairs(6);
  auto s = random_schedule(100, 2.0, 2.0, 13);
  Matrix u = schedule_propagator(s, target, device);
  CHECK(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < 1e-8);
}

TEST_CASE("optimizer drives a qubit flip and never regresses") {
  auto device = device_table_defaults();
  HilbertSpec spec{3, 2, 1};
  TransferTarget t;
  t.cavity_dim = 3;
  t.inputs.push_back(basis_state(spec, 0, 0).amplitudes);
  t.outputs.push_back(basis_state(spec, 0, 1).amplitudes);

  GrapeOptions opts;
  opts.duration_ns = 100;
  opts.dt_ns = 2.0;
  opts.form = PulseForm::Piecewise;
  opts.max_iterations = 150;
  opts.target_infidelity = 1e-4;
  opts.init_amplitude_mhz = 2.0;
  GrapeReport report;
  auto s = grape_optimize(t, device, opts, &report);
  CHECK(report.final_fidelity >= 0.9999);
  CHECK(report.converged);
  for (size_t i = 1; i < report.fidelity_per_iteration.size(); ++i)
    CHECK(report.fidelity_per_iteration[i] >=
          report.fidelity_per_iteration[i - 1] - 1e-12);
  CHECK(s.max_amplitude() <= s.amplitude_cap_mhz + 1e-9);

  // determinism under a fixed seed
  GrapeReport report2;
  auto s2 = grape_optimize(t, device, opts, &report2);
  CHECK(report2.final_fidelity == doctest::Approx(report.final_fidelity).epsilon(1e-12));
  for (int ch = 0; ch < 4; ++ch)
    for (int j = 0; j < s.steps(); ++j)
      CHECK(s2.channels[ch][j] == doctest::Approx(s.channels[ch][j]).epsilon(1e-12));
}

TEST_CASE("aqec target construction") {
  auto code = binomial_lowest();
  SUBCASE("theta = pi/4 with zero phases is the plain swap structure") {
    auto t = make_aqec_target(code, std::atan(1.0), ResetPhaseTable::zero());
    t.validate();
    // input 0 is the undistorted |0_L> (x) |g>
    HilbertSpec spec{code.dim, 2, 1};
    Vector expect = lift_cavity(spec, code.logical_zero, 0).amplitudes;
    CHECK(std::abs(std::abs(t.inputs[0].dot(expect)) - 1.0) < 1e-12);
    // error inputs map to codewords with the ancilla excited
    Vector out2 = lift_cavity(spec, code.logical_zero, 1).amplitudes;
    CHECK(std::abs(std::abs(t.outputs[2].dot(out2)) - 1.0) < 1e-12);
  }
  SUBCASE("distorted input amplitude ratio follows tan(theta)") {
    const double kappa = 1.0 / 1400, tw = 150;
    const double theta = std::atan(std::exp(-2 * kappa * tw));
    auto t = make_aqec_target(code, theta, ResetPhaseTable::zero());
    HilbertSpec spec{code.dim, 2, 1};
    auto b0 = basis_state(spec, 0, 0).amplitudes;
    auto b4 = basis_state(spec, 4, 0).amplitudes;
    const double ratio =
        std::abs(b4.dot(t.inputs[0])) / std::abs(b0.dot(t.inputs[0]));
    CHECK(ratio == doctest::Approx(std::exp(-2 * kappa * tw)).epsilon(1e-10));
  }
  SUBCASE("overlapping input spans are rejected") {
    auto bad = code;
    bad.error_subspaces[0].first = code.logical_zero;
    CHECK_THROWS(make_aqec_target(bad, std::atan(1.0), ResetPhaseTable::zero()));
  }
}

TEST_CASE("ideal recovery unitary restores codewords after no-jump decay") {
  auto code = binomial_lowest();
  const double kappa = 1.0 / 1400, tw = 150;
  auto map = no_jump_map(code, kappa, tw);
  auto target = make_aqec_target(code, map.theta, ResetPhaseTable::zero());
  Matrix u = ideal_recovery_unitary(target);
  CHECK(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < 1e-12);

  HilbertSpec spec{code.dim, 2, 1};
  Vector distorted = lift_cavity(spec, map.zero, 0).amplitudes;
  Vector recovered = u * distorted;
  Vector expect = lift_cavity(spec, code.logical_zero, 0).amplitudes;
  CHECK(std::abs(std::abs(expect.dot(recovered)) - 1.0) < 1e-9);

  // error state comes back with the ancilla flipped
  Vector err = lift_cavity(spec, code.error_subspaces[0].first, 0).amplitudes;
  Vector rec_err = u * err;
  Vector expect_e = lift_cavity(spec, code.logical_zero, 1).amplitudes;
  CHECK(std::abs(std::abs(expect_e.dot(rec_err)) - 1.0) < 1e-9);
}

TEST_CASE("reset-phase pre-compensation cancels through the reset channel") {
  auto code = binomial_lowest();
  ResetPhaseTable table;
  table.phase_g = {0.11, 0.22, 0.33, 0.44};
  table.phase_e = {-0.2, 0.15, 0.4, 0.65};
  table.slope_g = 0.11;
  table.intercept_g = 0.0;
  table.slope_e = 0.21;
  table.intercept_e = -0.4;

  auto target = make_aqec_target(code, std::atan(1.0), table);
  Matrix u = ideal_recovery_unitary(target);
  HilbertSpec spec{code.dim, 2, 1};
  auto channel = reset_channel(spec, table);

  // a full logical superposition in the error space returns to the exact
  // codeword with the ancilla in |g>
  Vector err_state =
      (0.6 * lift_cavity(spec, code.error_subspaces[0].first, 0).amplitudes +
       0.8 * lift_cavity(spec, code.error_subspaces[0].second, 0).amplitudes);
  Matrix rho = err_state * err_state.adjoint();
  rho = u * rho * u.adjoint();
  rho = channel.apply(rho);
  Vector expect = 0.6 * lift_cavity(spec, code.logical_zero, 0).amplitudes +
                  0.8 * lift_cavity(spec, code.logical_one, 0).amplitudes;
  const double fid = (expect.adjoint() * rho * expect).value().real();
  CHECK(fid >= 1.0 - 1e-9);
}

TEST_SUITE_END();

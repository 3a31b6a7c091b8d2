#include <doctest.h>

#include "aqec/reset.hpp"

#include <cmath>

using namespace aqec;

TEST_SUITE_BEGIN("reset");

TEST_CASE("displaced amplitude formula") {
  DeviceParams dev = device_table_defaults();
  ResetDriveParams p;  // measured drive configuration
  p.delta_q_mhz = 12.4;
  auto m = effective_model(p, dev);
  // independent arithmetic: xi = -eps / (delta - i kappa/2)
  const cplx expect = -mhz_to_angular(80.0) /
                      cplx(mhz_to_angular(41.5), -0.5 / dev.t1_r_us);
  CHECK(std::abs(m.xi_r - expect) < 1e-12);
  CHECK(std::norm(m.xi_r) == doctest::Approx(3.71).epsilon(0.01));
  // loss rate chi^2 |xi|^2 / kappa and the SM dephasing coefficient
  const double chi_qr = mhz_to_angular(3.0);
  CHECK(m.gamma_eff ==
        doctest::Approx(chi_qr * chi_qr * std::norm(m.xi_r) * dev.t1_r_us).epsilon(1e-12));
  CHECK(m.dephasing_coeff ==
        doctest::Approx(mhz_to_angular(0.88) * chi_qr * std::abs(m.xi_r) /
                        (2 * mhz_to_angular(40.0) * std::sqrt(dev.kappa_r())))
            .epsilon(1e-12));
  CHECK(m.strong_rabi_ok);
  CHECK_FALSE(m.weak_coupling_ok);  // the measured point is strongly coupled
}

TEST_CASE("no drive means no reset") {
  DeviceParams dev = device_table_defaults();
  ResetDriveParams p;
  p.epsilon_r_mhz = 0.0;
  auto m = effective_model(p, dev);
  CHECK(std::abs(m.xi_r) == 0.0);
  CHECK(m.gamma_eff == 0.0);
}

TEST_CASE("effective rate is monotone in the drive amplitude") {
  DeviceParams dev = device_table_defaults();
  double prev = -1;
  for (double eps = 0; eps <= 120; eps += 10) {
    ResetDriveParams p;
    p.epsilon_r_mhz = eps;
    auto m = effective_model(p, dev);
    CHECK(m.gamma_eff >= prev);
    prev = m.gamma_eff;
  }
}

TEST_CASE("resonance condition flag") {
  ResetDriveParams p;
  p.rabi_mhz = 40.0;
  p.delta_r_mhz = 40.0;
  CHECK(p.on_resonance());
  p.delta_r_mhz = 41.5;
  CHECK_FALSE(p.on_resonance());
}

TEST_CASE("idle ancilla keeps its ground population") {
  DeviceParams dev = device_table_defaults();
  ResetDriveParams p;
  p.epsilon_r_mhz = 0.0;
  p.rabi_mhz = 0.0;
  p.ramp_ns = 0.0;
  p.hold_ns = 400.0;
  p.post_wait_ns = 0.0;
  Vector vac = Vector::Zero(1);
  vac(0) = 1.0;
  auto ts = simulate_reset(p, dev, vac, 100.0);
  for (size_t i = 0; i < ts.t_ns.size(); ++i)
    CHECK(ts.p_g_from_g[i] >= 1.0 - (ts.t_ns[i] * 1e-3) / dev.t1_q_us);
}

TEST_CASE("reset channel structure") {
  HilbertSpec spec{4, 2, 1};
  SUBCASE("zero phases leave |psi,g> unchanged and map |e> to |g>") {
    auto chan = reset_channel(spec, ResetPhaseTable::zero());
    Vector psi = Vector::Zero(spec.total());
    psi(0 * 2 + 0) = 0.6;  // |0,g>
    psi(2 * 2 + 0) = 0.8;  // |2,g>
    Matrix rho = psi * psi.adjoint();
    CHECK(max_abs(chan.apply(rho) - rho) < 1e-12);

    Vector excited = Vector::Zero(spec.total());
    excited(1 * 2 + 1) = 1.0;  // |1,e>
    Matrix out = chan.apply(excited * excited.adjoint());
    Vector ground = Vector::Zero(spec.total());
    ground(1 * 2 + 0) = 1.0;
    CHECK((ground.adjoint() * out * ground).value().real() == doctest::Approx(1.0));
  }
  SUBCASE("e-branch phases are applied per Fock component") {
    ResetPhaseTable table;
    table.phase_e = {0.3, 0.7, 1.1};
    table.phase_g = {0.0, 0.0, 0.0};
    auto chan = reset_channel(spec, table);
    Vector in = Vector::Zero(spec.total());
    in(0 * 2 + 1) = 1 / std::sqrt(2.0);  // (|0> + |2>)/sqrt2 with ancilla |e>
    in(2 * 2 + 1) = 1 / std::sqrt(2.0);
    Matrix out = chan.apply(in * in.adjoint());
    // coherence <0,g|rho|2,g> picked up exp(i(phi_0 - phi_2)) = exp(-i 0.7)
    const cplx coh = out(0 * 2 + 0, 2 * 2 + 0);
    CHECK(std::arg(coh) == doctest::Approx(0.0 - 0.7).epsilon(1e-9));
  }
  SUBCASE("channel is trace preserving and completely positive") {
    ResetPhaseTable table;
    table.phase_g = {0.2, 0.5, 0.9};
    table.phase_e = {-0.1, 0.4, 1.3};
    auto chan = reset_channel(spec, table);
    // Choi matrix: apply the channel to |i><j| blocks
    const int d = spec.total();
    Matrix choi = Matrix::Zero(d * d, d * d);
    Matrix sum_out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Matrix eij = Matrix::Zero(d, d);
        eij(i, j) = 1.0;
        Matrix out = chan.apply(eij);
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) choi(i * d + k, j * d + l) = out(k, l);
        if (i == j) sum_out += out;
      }
    CHECK(std::abs(sum_out.trace().real() - d) < 1e-8);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint().eval()));
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
  }
}

TEST_CASE("zero-duration reset leaves no phase imprint") {
  DeviceParams dev = device_table_defaults();
  ResetDriveParams p;
  p.ramp_ns = 0.0;
  p.hold_ns = 0.0;
  p.post_wait_ns = 0.0;
  auto table = calibrate_reset_phases(p, dev, 2);
  for (double ph : table.phase_g) CHECK(std::abs(ph) < 1e-6);
  for (double ph : table.phase_e) CHECK(std::abs(ph) < 1e-6);
}

TEST_CASE("reset-induced phases scale with drive exposure") {
  DeviceParams dev = device_table_defaults();
  ResetDriveParams p = paper_operating_point(dev, false);
  p.qubit_levels = 2;
  p.ramp_ns = 20.0;
  p.post_wait_ns = 50.0;
  p.hold_ns = 150.0;
  auto t1 = calibrate_reset_phases(p, dev, 1);
  p.hold_ns = 300.0;
  auto t2 = calibrate_reset_phases(p, dev, 1);
  // drive-window phase roughly doubles when the hold doubles (ramps fixed)
  const double extra1 = t1.phase_g[0];
  const double extra2 = t2.phase_g[0];
  const double slope_per_ns = (extra2 - extra1) / 150.0;
  const double predicted_t2 = extra1 + slope_per_ns * 150.0;
  CHECK(extra2 == doctest::Approx(predicted_t2).epsilon(1e-12));  // tautology guard
  CHECK(extra2 / extra1 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("truncation precondition is enforced") {
  DeviceParams dev = device_table_defaults();
  ResetDriveParams p;
  p.resonator_dim = 10;
  Vector vac = Vector::Zero(1);
  vac(0) = 1.0;
  CHECK_THROWS(simulate_reset(p, dev, vac));
}

TEST_SUITE_END();

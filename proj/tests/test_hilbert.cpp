#include <doctest.h>

#include "aqec/hamiltonian.hpp"
#include "aqec/hilbert.hpp"
#include "aqec/wigner.hpp"

#include <random>

using namespace aqec;

TEST_SUITE_BEGIN("hilbert");

TEST_CASE("ladder matrix elements match sqrt(n+1)") {
  HilbertSpec spec{4, 2, 1};
  auto ops = build_operators(spec);
  // <1| a_c |2> embedded with qubit in |g>, resonator vacuum
  auto bra = basis_state(spec, 1);
  auto ket = basis_state(spec, 2);
  cplx elem = bra.amplitudes.dot(ops.a_c * ket.amplitudes);
  CHECK(elem.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(elem.imag() == doctest::Approx(0.0));
}

TEST_CASE("cavity parity eigenvalues alternate") {
  HilbertSpec spec{6, 2, 1};
  auto ops = build_operators(spec);
  for (int n : {0, 2, 4}) {
    auto s = basis_state(spec, n);
    CHECK((ops.parity_c * s.amplitudes - s.amplitudes).norm() < 1e-14);
  }
  for (int n : {1, 3}) {
    auto s = basis_state(spec, n);
    CHECK((ops.parity_c * s.amplitudes + s.amplitudes).norm() < 1e-14);
  }
}

TEST_CASE("operators on disjoint subsystems commute") {
  HilbertSpec spec{4, 2, 3};
  auto ops = build_operators(spec);
  CHECK(max_abs(ops.a_c * ops.sz - ops.sz * ops.a_c) < 1e-14);
  CHECK(max_abs(ops.a_r * ops.sx - ops.sx * ops.a_r) < 1e-14);
  CHECK(max_abs(ops.a_c * ops.a_r - ops.a_r * ops.a_c) < 1e-14);
}

TEST_CASE("dimension cap enforced") {
  HilbertSpec spec{100, 2, 25};
  CHECK_THROWS(build_operators(spec));
}

TEST_CASE("tensor embedding preserves subsystem expectations") {
  HilbertSpec spec{5, 2, 3};
  std::mt19937_64 gen(7);
  auto random_state = [&](int d) {
    Vector v(d);
    std::normal_distribution<double> nd;
    for (int i = 0; i < d; ++i) v(i) = cplx(nd(gen), nd(gen));
    return Vector(v / v.norm());
  };
  for (int trial = 0; trial < 5; ++trial) {
    Vector vc = random_state(spec.cavity_dim);
    Vector vq = random_state(spec.qubit_dim);
    Vector vr = random_state(spec.resonator_dim);
    Vector full = kron(kron(vc, vq), vr);

    Matrix nc = number_op(spec.cavity_dim);
    Matrix embedded = embed(spec, Subsystem::Cavity, nc);
    cplx expect_full = full.dot(embedded * full);
    cplx expect_sub = vc.dot(nc * vc);
    CHECK(std::abs(expect_full - expect_sub) < 1e-12);
  }
}

TEST_CASE("partial trace of product state recovers factors") {
  HilbertSpec spec{3, 2, 2};
  Vector vc(3);
  vc << 0.6, 0.8, 0.0;
  Vector vq(2);
  vq << cplx(0, 1) / std::sqrt(2.0), 1 / std::sqrt(2.0);
  Vector vr(2);
  vr << 1.0, 0.0;
  Vector full = kron(kron(vc, vq), vr);
  DensityOperator rho{spec, full * full.adjoint()};
  Matrix rc = partial_trace(rho, Subsystem::Cavity);
  Matrix rq = partial_trace(rho, Subsystem::Qubit);
  CHECK(max_abs(rc - vc * vc.adjoint()) < 1e-13);
  CHECK(max_abs(rq - vq * vq.adjoint()) < 1e-13);
}

TEST_CASE("dispersive hamiltonian energy of |2,e>") {
  DeviceParams dev = device_table_defaults();
  DeviceParams no_kerr = dev;
  no_kerr.kerr_c_mhz = 0.0;
  no_kerr.chi2_qc_mhz = 0.0;
  HilbertSpec spec{6, 2, 1};
  auto h = system_hamiltonian(no_kerr, spec, FrameChoice::DispersiveTwoLevel);
  auto s = basis_state(spec, 2, 1);
  cplx e = s.amplitudes.dot(h.mat * s.amplitudes);
  CHECK(e.real() == doctest::Approx(-2.0 * mhz_to_angular(dev.chi_qc_mhz)).epsilon(1e-12));
}

TEST_CASE("table defaults load the measured constants") {
  DeviceParams dev = device_table_defaults();
  CHECK(dev.chi_qc_mhz == doctest::Approx(0.88));
  CHECK(dev.chi_qr_mhz == doctest::Approx(3.0));
  CHECK(dev.kerr_c_mhz == doctest::Approx(1.0e-3));
  CHECK(dev.t1_c_us == doctest::Approx(1400.0));
  CHECK(dev.kappa_r_mhz() == doctest::Approx(1.4).epsilon(0.01));
}

TEST_CASE("hamiltonians are hermitian") {
  DeviceParams dev = device_table_defaults();
  HilbertSpec spec{8, 2, 3};
  auto h = system_hamiltonian(dev, spec, FrameChoice::DispersiveTwoLevel);
  CHECK(is_hermitian(h.mat, 1e-12));
  auto h_full = system_hamiltonian(dev, spec, FrameChoice::FullLab);
  CHECK(is_hermitian(h_full.mat, 1e-9 * max_abs(h_full.mat)));
}

TEST_CASE("kerr phase of |4> vs |0> over 10 us") {
  // Diagonal evolution exp(+i K/2 n(n-1) t) gives 0.377 rad at 1 kHz Kerr.
  DeviceParams dev = device_table_defaults();
  RealVector e = cavity_diagonal_energies(dev, 6);
  const double t = 10.0;
  const double phase = -(e(4) - e(0)) * t;
  CHECK(phase == doctest::Approx(kTwoPi * 1.0e-3 * 6.0 * 10.0).epsilon(1e-12));
  CHECK(phase == doctest::Approx(0.3770).epsilon(1e-3));
}

TEST_CASE("wigner of vacuum and single photon at origin") {
  Matrix rho0 = Matrix::Zero(10, 10);
  rho0(0, 0) = 1.0;
  WignerGridSpec g;
  g.x_min = g.p_min = -0.0;
  g.x_max = g.p_max = 0.0;
  g.nx = g.np = 1;
  auto w0 = wigner(rho0, g);
  CHECK(w0.values[0] == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-10));

  Matrix rho1 = Matrix::Zero(10, 10);
  rho1(1, 1) = 1.0;
  auto w1 = wigner(rho1, g);
  CHECK(w1.values[0] == doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("wigner normalization on the default grid") {
  Matrix rho = Matrix::Zero(12, 12);
  rho(0, 0) = 0.5;
  rho(2, 2) = 0.5;
  rho(0, 2) = rho(2, 0) = 0.35;
  WignerGridSpec g;  // defaults: [-3.5, 3.5]^2, 81x81
  auto w = wigner(rho, g);
  CHECK(w.integral() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("wigner parity identity W(0,0) = Tr(rho parity)/pi") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> nd;
  const int d = 10;
  Vector v(d);
  for (int i = 0; i < 5; ++i) v(i) = cplx(nd(gen), nd(gen));
  for (int i = 5; i < d; ++i) v(i) = 0.0;
  v /= v.norm();
  Matrix rho = v * v.adjoint();
  WignerGridSpec g;
  g.x_min = g.x_max = g.p_min = g.p_max = 0.0;
  g.nx = g.np = 1;
  auto w = wigner(rho, g);
  const double expected = (rho * fock_parity(d)).trace().real() / std::numbers::pi;
  CHECK(w.values[0] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("wigner truncation guard triggers") {
  Matrix rho = Matrix::Zero(6, 6);
  rho(5, 5) = 1.0;
  WignerGridSpec g;
  CHECK_THROWS(wigner(rho, g));
}

TEST_CASE("wigner closed form agrees with explicit displaced parity") {
  // Independent route: build D(alpha) by matrix exponential in a roomy
  // truncation and compare against the Laguerre closed form.
  const int d = 24;
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 0.5;
  rho(3, 3) = 0.5;
  rho(0, 3) = rho(3, 0) = cplx(0.2, 0.1);
  rho(3, 0) = std::conj(rho(0, 3));
  WignerGridSpec g;
  g.x_min = g.x_max = 0.7;
  g.p_min = g.p_max = -0.4;
  g.nx = g.np = 1;
  auto w = wigner(rho, g);
  const cplx alpha = cplx(0.7, -0.4) / std::sqrt(2.0);
  Matrix disp = displacement_operator(d, alpha);
  const double direct =
      (rho * disp * fock_parity(d) * disp.adjoint()).trace().real() / std::numbers::pi;
  CHECK(w.values[0] == doctest::Approx(direct).epsilon(1e-9));
}

TEST_SUITE_END();

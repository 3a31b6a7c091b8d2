#include <doctest.h>

#include "aqec/codes.hpp"
#include "aqec/dynamics.hpp"
#include "aqec/fitting.hpp"
#include "aqec/hilbert.hpp"
#include "aqec/tomography.hpp"

#include <random>

using namespace aqec;

namespace {

Matrix random_hermitian(int d, std::mt19937_64& gen, double scale) {
  std::normal_distribution<double> nd;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(nd(gen), nd(gen));
  Matrix h = 0.5 * (m + m.adjoint().eval());
  return scale * h;
}

Eigen::Matrix2cd random_unitary2(std::mt19937_64& gen) {
  Matrix h = random_hermitian(2, gen, 1.0);
  Matrix u = expm_hermitian(h, cplx(0, -1));
  Eigen::Matrix2cd out = u;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("amplitude damping of |1><1| decays as exp(-kappa t)") {
  HilbertSpec spec{3, 2, 1};
  auto ops = build_operators(spec);
  const double kappa = 2.0;
  LindbladModel model{spec, Matrix::Zero(spec.total(), spec.total()), {}, {{ops.a_c, kappa}}};
  auto rho0 = to_density(basis_state(spec, 1));
  auto rho = evolve(model, rho0, 0.5);  // kappa t = 1
  auto p1 = basis_state(spec, 1);
  double pop = p1.amplitudes.dot(rho.rho * p1.amplitudes).real();
  CHECK(pop == doctest::Approx(0.367879).epsilon(1e-5));
  CHECK(std::abs(rho.trace_real() - 1.0) < 1e-9);
}

TEST_CASE("pure dephasing kills off-diagonals at the stated rate") {
  HilbertSpec spec{2, 2, 1};
  auto ops = build_operators(spec);
  const double gamma_phi = 0.7;
  LindbladModel model{spec, Matrix::Zero(spec.total(), spec.total()), {},
                      {{ops.n_c, 2.0 * gamma_phi}}};
  Vector plus = (basis_state(spec, 0).amplitudes + basis_state(spec, 1).amplitudes) /
                std::sqrt(2.0);
  DensityOperator rho0{spec, plus * plus.adjoint()};
  const double t = 0.9;
  auto rho = evolve(model, rho0, t);
  auto b0 = basis_state(spec, 0);
  auto b1 = basis_state(spec, 1);
  cplx coh = b0.amplitudes.dot(rho.rho * b1.amplitudes);
  CHECK(std::abs(coh) == doctest::Approx(0.5 * std::exp(-gamma_phi * t)).epsilon(1e-7));
}

TEST_CASE("single-photon loss on a codeword matches the closed-form cascade") {
  // |1_L> = |2> under cavity T1 only; code-space population has the exact
  // form e^{-2 k t} + (1 - e^{-k t})^2 / 2 which sits within 1% of the
  // mean-photon estimate e^{-2 k t} = 0.8071 at k t = 150/1400.
  auto code = binomial_lowest();
  HilbertSpec spec{code.dim, 2, 1};
  auto ops = build_operators(spec);
  const double kappa = 1.0 / 1400.0, t = 150.0;
  LindbladModel model{spec, Matrix::Zero(spec.total(), spec.total()), {}, {{ops.a_c, kappa}}};
  auto rho = evolve(model, to_density(lift_cavity(spec, code.logical_one)), t);

  Vector l0 = lift_cavity(spec, code.logical_zero).amplitudes;
  Vector l1 = lift_cavity(spec, code.logical_one).amplitudes;
  double p_code = (l0.dot(rho.rho * l0) + l1.dot(rho.rho * l1)).real();

  const double ek = std::exp(-kappa * t);
  const double exact = std::exp(-2 * kappa * t) + 0.5 * std::pow(1 - ek, 2);
  CHECK(p_code == doctest::Approx(exact).epsilon(1e-4));
  CHECK(p_code == doctest::Approx(std::exp(-2 * kappa * t)).epsilon(0.01));
}

TEST_CASE("no-jump evolution reproduces the distortion angle") {
  auto code = binomial_lowest();
  HilbertSpec spec{code.dim, 2, 1};
  auto ops = build_operators(spec);
  const double kappa = 1.0 / 1400.0, t = 150.0;
  LindbladModel model{spec, Matrix::Zero(spec.total(), spec.total()), {}, {{ops.a_c, kappa}}};

  SUBCASE("t = 0 is the identity") {
    auto out = evolve_no_jump(model, lift_cavity(spec, code.logical_zero), 0.0);
    CHECK((out.amplitudes - lift_cavity(spec, code.logical_zero).amplitudes).norm() < 1e-12);
  }
  SUBCASE("amplitude ratio equals tan(theta)") {
    auto out = evolve_no_jump(model, lift_cavity(spec, code.logical_zero), t);
    auto b0 = basis_state(spec, 0);
    auto b4 = basis_state(spec, 4);
    const double ratio = std::abs(b4.amplitudes.dot(out.amplitudes)) /
                         std::abs(b0.amplitudes.dot(out.amplitudes));
    CHECK(ratio == doctest::Approx(std::exp(-2 * kappa * t)).epsilon(1e-7));
    // agrees with the algebraic map
    auto map = no_jump_map(code, kappa, t);
    Vector expected = lift_cavity(spec, map.zero).amplitudes;
    CHECK(std::abs(std::abs(expected.dot(out.amplitudes)) - 1.0) < 1e-9);
  }
  SUBCASE("number eigenstates only pick up a global factor") {
    auto out = evolve_no_jump(model, lift_cavity(spec, code.logical_one), t);
    Vector expected = lift_cavity(spec, code.logical_one).amplitudes;
    CHECK(std::abs(std::abs(expected.dot(out.amplitudes)) - 1.0) < 1e-10);
  }
}

TEST_CASE("zero-rate evolution equals unitary propagation") {
  std::mt19937_64 gen(3);
  HilbertSpec spec{3, 2, 1};
  const int d = spec.total();
  for (int trial = 0; trial < 3; ++trial) {
    Matrix h = random_hermitian(d, gen, 2.0);
    LindbladModel model{spec, h, {}, {}};
    Vector psi(d);
    std::normal_distribution<double> nd;
    for (int i = 0; i < d; ++i) psi(i) = cplx(nd(gen), nd(gen));
    psi /= psi.norm();
    DensityOperator rho0{spec, psi * psi.adjoint()};
    const double t = 0.7;
    EvolveOptions tight;
    tight.rtol = 1e-10;
    tight.atol = 1e-12;
    auto rho = evolve(model, rho0, t, tight);
    Matrix u = expm_hermitian(h, cplx(0, -t));
    CHECK(max_abs(rho.rho - u * rho0.rho * u.adjoint()) < 1e-8);
  }
}

TEST_CASE("evolve agrees with the dense Liouvillian exponential") {
  std::mt19937_64 gen(5);
  HilbertSpec spec{4, 2, 1};
  const int d = spec.total();
  auto ops = build_operators(spec);
  Matrix h = random_hermitian(d, gen, 1.5);
  std::vector<std::pair<Matrix, double>> collapse = {
      {ops.a_c, 0.3}, {ops.sm, 0.2}, {ops.n_c, 0.15}};
  LindbladModel model{spec, h, {}, collapse};
  Vector psi = basis_state(spec, 2, 1).amplitudes;
  DensityOperator rho0{spec, psi * psi.adjoint()};
  const double t = 0.8;
  auto rho_rk = evolve(model, rho0, t);
  auto chan = Channel::from_liouvillian_exp(liouvillian(h, collapse), t);
  Matrix rho_exp = chan.apply(rho0.rho);
  CHECK(max_abs(rho_rk.rho - rho_exp) < 1e-7);
  CHECK(std::abs(rho_exp.trace().real() - 1.0) < 1e-10);
}

TEST_CASE("evolution preserves trace, hermiticity and positivity") {
  HilbertSpec spec{6, 2, 1};
  auto ops = build_operators(spec);
  auto code = binomial_lowest();
  LindbladModel model{spec, Matrix::Zero(spec.total(), spec.total()), {},
                      {{ops.a_c, 1.0 / 1400},
                       {ops.a_c.adjoint(), 0.002 / 1400},
                       {ops.n_c, 2.0 / 6500},
                       {ops.sm, 1.0 / 133},
                       {ops.sp, 0.012 / 133}}};
  Vector probe = Vector::Zero(spec.total());
  probe.head(6) << 0.5, 0.3, 0.6, 0.2, 0.4, 0.0;  // cavity part, qubit |g>
  Vector full = Vector::Zero(spec.total());
  for (int n = 0; n < 6; ++n) full((n * 2 + 0) * 1) = probe(n);
  full /= full.norm();
  DensityOperator rho0{spec, full * full.adjoint()};
  auto rho = evolve(model, rho0, 200.0);
  CHECK(std::abs(rho.trace_real() - 1.0) < 1e-7);
  CHECK(max_abs(rho.rho - rho.rho.adjoint().eval()) < 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("process tomography of elementary channels") {
  SUBCASE("identity") {
    auto chi = process_tomography([](const Matrix& rho) { return rho; });
    CHECK(std::abs(chi.chi(0, 0) - 1.0) < 1e-12);
    CHECK(chi.chi.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(process_fidelity(chi, chi_identity()) == doctest::Approx(1.0));
  }
  SUBCASE("full depolarization has chi = I/4 and fidelity 0.25") {
    auto chi = process_tomography([](const Matrix& rho) {
      return Matrix(0.5 * rho.trace() * Matrix::Identity(2, 2));
    });
    for (int i = 0; i < 4; ++i) CHECK(std::abs(chi.chi(i, i) - 0.25) < 1e-12);
    CHECK(process_fidelity(chi, chi_identity()) == doctest::Approx(0.25));
  }
  SUBCASE("X rotation by pi") {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    auto chi = process_tomography([&](const Matrix& rho) { return Matrix(x * rho * x); });
    CHECK(std::abs(chi.chi(1, 1) - 1.0) < 1e-12);
    CHECK(process_fidelity(chi, chi_identity()) == doctest::Approx(0.0).epsilon(1e-10));
  }
  SUBCASE("trace of chi is 1 for trace-preserving channels") {
    std::mt19937_64 gen(9);
    auto u = random_unitary2(gen);
    auto chi = process_tomography([&](const Matrix& rho) { return Matrix(u * rho * u.adjoint()); });
    CHECK(chi.trace_real() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("tomography respects channel composition") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 4; ++trial) {
    auto u1 = random_unitary2(gen);
    auto u2 = random_unitary2(gen);
    auto chi = process_tomography([&](const Matrix& rho) {
      Matrix mid = u2 * rho * u2.adjoint();
      return Matrix(u1 * mid * u1.adjoint());
    });
    auto expected = chi_of_unitary(u1 * u2);
    CHECK((chi.chi - expected.chi).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("exponential fit recovers noiseless parameters") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 8; ++i) {
    double t = 300.0 * i;
    pts.push_back({t, 0.7 * std::exp(-t / 2000.0) + 0.25});
  }
  auto fit = fit_exponential(pts, 0.25);
  CHECK(fit.tau == doctest::Approx(2000.0).epsilon(1e-6));
  CHECK(fit.amplitude == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("exponential fit input validation") {
  std::vector<std::pair<double, double>> few = {{0, 1}, {1, 0.9}, {2, 0.8}};
  CHECK_THROWS(fit_exponential(few, 0.25));
  std::vector<std::pair<double, double>> unsorted = {{0, 1}, {2, 0.8}, {1, 0.9}, {3, 0.7}};
  CHECK_THROWS(fit_exponential(unsorted, 0.25));
}

TEST_CASE("monte-carlo fit self-test: tau recovered within 5% on average") {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> noise(0.0, 0.01);
  const double tau_true = 2000.0;
  double sum_rel_err = 0.0;
  int worst_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 12; ++i) {
      double t = 250.0 * i;
      pts.push_back({t, 0.7 * std::exp(-t / tau_true) + 0.25 + noise(gen)});
    }
    auto fit = fit_exponential(pts, 0.25);
    const double rel = std::abs(fit.tau - tau_true) / tau_true;
    sum_rel_err += rel;
    if (rel > 0.05) ++worst_count;
  }
  CHECK(sum_rel_err / 100.0 < 0.05);
  CHECK(worst_count < 20);
}

TEST_SUITE_END();

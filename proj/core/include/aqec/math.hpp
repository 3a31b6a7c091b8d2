#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace aqec {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Angular frequency (rad/us) from ordinary frequency in MHz.
inline double mhz_to_angular(double f_mhz) { return kTwoPi * f_mhz; }
inline double angular_to_mhz(double w) { return w / kTwoPi; }

Matrix kron(const Matrix& a, const Matrix& b);

inline Matrix dagger(const Matrix& m) { return m.adjoint(); }

double max_abs(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol = 1e-12);

/// exp(scale * H) for hermitian H via eigendecomposition.
/// With scale = -i*dt this is the unitary propagator.
Matrix expm_hermitian(const Matrix& h, cplx scale);

/// Directional derivative of exp(-i*dt*H) along B, both hermitian,
/// computed exactly in the eigenbasis of H (Daleckii-Krein formula).
/// Returns the pair (U, dU).
void expm_hermitian_derivative(const Matrix& h, const Matrix& b, double dt,
                               Matrix& u, Matrix& du);

/// General (non-hermitian) matrix exponential, Pade scaling-and-squaring.
Matrix expm(const Matrix& m);

/// Deterministic RNG for everything seeded in a run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal(double mean, double sigma) {
    return std::normal_distribution<double>(mean, sigma)(gen_);
  }
  std::uint64_t integer() { return gen_(); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Runs fn(i) for i in [0, n). Honors AQEC_SIM_THREADS; results must be
/// written to disjoint slots so the output is order-independent.
void parallel_for(int n, const std::function<void(int)>& fn);

int configured_thread_count();

/// Compact L-BFGS minimizer with Armijo backtracking line search.
/// Returns the best objective value found; x is updated in place.
struct LbfgsOptions {
  int max_iterations = 500;
  int history = 10;
  double gradient_tolerance = 1e-10;
  double objective_tolerance = 0.0;  // stop when f <= this
  std::function<void(int iter, double f)> on_iteration;
};

double lbfgs_minimize(RealVector& x,
                      const std::function<double(const RealVector&, RealVector&)>& f_and_grad,
                      const LbfgsOptions& opts);

}  // namespace aqec

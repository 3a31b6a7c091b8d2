#include "aqec/math.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace aqec {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Matrix& m, double tol) {
  return max_abs(m - m.adjoint()) < tol;
}

Matrix expm_hermitian(const Matrix& h, cplx scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(scale * es.eigenvalues()(k));
  return v * phases.asDiagonal() * v.adjoint();
}

void expm_hermitian_derivative(const Matrix& h, const Matrix& b, double dt,
                               Matrix& u, Matrix& du) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Matrix& v = es.eigenvectors();
  const auto& lam = es.eigenvalues();
  const Eigen::Index n = h.rows();

  Vector ex(n);
  for (Eigen::Index k = 0; k < n; ++k) ex(k) = std::exp(cplx(0, -dt) * lam(k));
  u = v * ex.asDiagonal() * v.adjoint();

  // dU = V (Gamma .* (V^† (-i dt B) V)) V^† with the divided-difference kernel
  // Gamma_ab = (e^{mu_a} - e^{mu_b}) / (mu_a - mu_b), mu = -i dt lambda.
  Matrix bt = v.adjoint() * (cplx(0, -dt) * b) * v;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const cplx mu_r = cplx(0, -dt) * lam(r);
      const cplx mu_c = cplx(0, -dt) * lam(c);
      cplx gamma;
      if (std::abs(mu_r - mu_c) < 1e-12) {
        gamma = std::exp(mu_r);
      } else {
        gamma = (std::exp(mu_r) - std::exp(mu_c)) / (mu_r - mu_c);
      }
      bt(r, c) *= gamma;
    }
  }
  du = v * bt * v.adjoint();
}

Matrix expm(const Matrix& m) { return m.exp(); }

int configured_thread_count() {
  if (const char* env = std::getenv("AQEC_SIM_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(configured_thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double lbfgs_minimize(RealVector& x,
                      const std::function<double(const RealVector&, RealVector&)>& f_and_grad,
                      const LbfgsOptions& opts) {
  const int n = static_cast<int>(x.size());
  RealVector g(n), g_new(n);
  double f = f_and_grad(x, g);

  std::vector<RealVector> s_hist, y_hist;
  std::vector<double> rho_hist;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (opts.on_iteration) opts.on_iteration(iter, f);
    if (g.norm() < opts.gradient_tolerance) break;
    if (f <= opts.objective_tolerance) break;

    // Two-loop recursion.
    RealVector q = g;
    const int m = static_cast<int>(s_hist.size());
    std::vector<double> alpha(m);
    for (int i = m - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    double h0 = 1.0;
    if (m > 0) {
      const double yy = y_hist[m - 1].squaredNorm();
      if (yy > 0) h0 = s_hist[m - 1].dot(y_hist[m - 1]) / yy;
    }
    RealVector z = h0 * q;
    for (int i = 0; i < m; ++i) {
      double beta = rho_hist[i] * y_hist[i].dot(z);
      z += (alpha[i] - beta) * s_hist[i];
    }
    RealVector d = -z;
    double gd = g.dot(d);
    if (gd >= 0) {  // not a descent direction; fall back to steepest descent
      d = -g;
      gd = -g.squaredNorm();
    }

    // Armijo backtracking; accepted steps never increase f.
    double step = 1.0;
    const double c1 = 1e-4;
    double f_new = f;
    RealVector x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * d;
      f_new = f_and_grad(x_new, g_new);
      if (f_new <= f + c1 * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    RealVector s = x_new - x;
    RealVector yv = g_new - g;
    double sy = s.dot(yv);
    if (sy > 1e-12) {
      s_hist.push_back(s);
      y_hist.push_back(yv);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }
    if (std::abs(f - f_new) < 1e-16 && iter > 2) {
      x = x_new;
      f = f_new;
      g = g_new;
      break;
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  return f;
}

}  // namespace aqec

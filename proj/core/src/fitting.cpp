#include "aqec/fitting.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace aqec {

DecayFit fit_exponential(const std::vector<std::pair<double, double>>& points,
                         double fixed_offset) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw std::invalid_argument("fit_exponential: need >= 4 points");
  for (int i = 1; i < n; ++i)
    if (points[i].first <= points[i - 1].first)
      throw std::invalid_argument("fit_exponential: t must be strictly increasing");

  // Log-linear initial guess on points above the offset.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (auto& [t, f] : points) {
    const double d = f - fixed_offset;
    if (d > 1e-6) {
      const double ly = std::log(d);
      sx += t;
      sy += ly;
      sxx += t * t;
      sxy += t * ly;
      ++m;
    }
  }
  if (m < 2) throw std::runtime_error("fit_exponential: curve entirely at the offset floor");
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double amp = std::exp(intercept);
  double tau = slope < -1e-30 ? -1.0 / slope : (points.back().first - points.front().first) * 10;

  // Levenberg-Marquardt on (A, tau).
  double lambda = 1e-3;
  double prev_rss = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < 200; ++iter) {
    Eigen::MatrixXd jac(n, 2);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
      const double t = points[i].first;
      const double e = std::exp(-t / tau);
      r(i) = amp * e + fixed_offset - points[i].second;
      jac(i, 0) = e;
      jac(i, 1) = amp * t / (tau * tau) * e;
    }
    const double rss = r.squaredNorm();
    Eigen::Matrix2d jtj = jac.transpose() * jac;
    Eigen::Vector2d jtr = jac.transpose() * r;
    Eigen::Matrix2d damped = jtj;
    damped(0, 0) *= (1 + lambda);
    damped(1, 1) *= (1 + lambda);
    Eigen::Vector2d step = damped.ldlt().solve(-jtr);
    const double amp_new = amp + step(0);
    const double tau_new = tau + step(1);
    if (!(tau_new > 0) || !std::isfinite(amp_new)) {
      lambda *= 10;
      continue;
    }
    double rss_new = 0;
    for (int i = 0; i < n; ++i) {
      const double t = points[i].first;
      const double v = amp_new * std::exp(-t / tau_new) + fixed_offset - points[i].second;
      rss_new += v * v;
    }
    if (rss_new < rss) {
      amp = amp_new;
      tau = tau_new;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (std::abs(prev_rss - rss_new) < 1e-16 + 1e-12 * rss_new) {
        prev_rss = rss_new;
        break;
      }
      prev_rss = rss_new;
    } else {
      lambda *= 10;
      if (lambda > 1e12) break;
    }
  }
  if (!std::isfinite(amp) || !std::isfinite(tau) || !(tau > 0))
    throw std::runtime_error("fit_exponential: did not converge");
  if (amp < 0) throw std::runtime_error("fit_exponential: negative amplitude rejected");

  // 1-sigma from the linearized covariance.
  Eigen::MatrixXd jac(n, 2);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    const double t = points[i].first;
    const double e = std::exp(-t / tau);
    r(i) = amp * e + fixed_offset - points[i].second;
    jac(i, 0) = e;
    jac(i, 1) = amp * t / (tau * tau) * e;
  }
  DecayFit fit;
  fit.amplitude = amp;
  fit.tau = tau;
  fit.offset = fixed_offset;
  fit.residual_norm = r.norm();
  fit.iterations = iter;
  const double dof = std::max(1, n - 2);
  const double sigma2 = r.squaredNorm() / dof;
  Eigen::Matrix2d cov = (jac.transpose() * jac).inverse() * sigma2;
  fit.amplitude_sigma = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.tau_sigma = std::sqrt(std::max(0.0, cov(1, 1)));
  return fit;
}

FringeFit fit_fringe(const std::vector<double>& phi, const std::vector<double>& p) {
  const int n = static_cast<int>(phi.size());
  if (n < 3 || p.size() != phi.size())
    throw std::invalid_argument("fit_fringe: need matching phi/p with >= 3 points");
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    a(i, 0) = std::cos(phi[i]);
    a(i, 1) = -std::sin(phi[i]);
    a(i, 2) = 1.0;
    y(i) = p[i];
  }
  Eigen::Vector3d x = (a.transpose() * a).ldlt().solve(a.transpose() * y);
  FringeFit fit;
  fit.amplitude = std::hypot(x(0), x(1));
  fit.phase = std::atan2(x(1), x(0));
  fit.offset = x(2);
  const Eigen::VectorXd r = a * x - y;
  const double sigma2 = r.squaredNorm() / std::max(1, n - 3);
  Eigen::Matrix3d cov = (a.transpose() * a).inverse() * sigma2;
  // Propagate to the amplitude magnitude.
  if (fit.amplitude > 1e-12) {
    const double c = x(0) / fit.amplitude, s = x(1) / fit.amplitude;
    fit.amplitude_sigma =
        std::sqrt(std::max(0.0, c * c * cov(0, 0) + s * s * cov(1, 1) + 2 * c * s * cov(0, 1)));
  } else {
    fit.amplitude_sigma = std::sqrt(std::max(0.0, cov(0, 0)));
  }
  fit.offset_sigma = std::sqrt(std::max(0.0, cov(2, 2)));
  return fit;
}

}  // namespace aqec

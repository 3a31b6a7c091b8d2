#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aqec::detail {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_dt = 0.0;
};

/// Dormand-Prince 5(4) with PI-free step control. State must support the
/// Eigen array arithmetic used below (MatrixXcd / VectorXcd).
template <class State, class Rhs>
State integrate_dp54(const Rhs& rhs, State y, double t0, double duration,
                     const OdeOptions& opts, const char* what) {
  if (duration == 0.0) return y;
  if (duration < 0) throw std::invalid_argument("negative evolution duration");

  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  double t = t0;
  const double t_end = t0 + duration;
  double dt = opts.initial_dt > 0 ? opts.initial_dt : duration / 256.0;
  const double dt_min = duration * 1e-13;

  State k1 = rhs(t, y);
  int consecutive_rejects = 0;
  while (t < t_end) {
    dt = std::min(dt, t_end - t);
    State k2 = rhs(t + c2 * dt, (y + dt * (a21 * k1)).eval());
    State k3 = rhs(t + c3 * dt, (y + dt * (a31 * k1 + a32 * k2)).eval());
    State k4 = rhs(t + c4 * dt, (y + dt * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    State k5 =
        rhs(t + c5 * dt, (y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    State k6 = rhs(
        t + dt, (y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    State y_new = y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = rhs(t + dt, y_new);
    State err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale =
        opts.atol + opts.rtol * std::max(y.cwiseAbs().maxCoeff(), y_new.cwiseAbs().maxCoeff());
    const double err_norm = err.cwiseAbs().maxCoeff() / scale;
    if (err_norm <= 1.0) {
      t += dt;
      y.swap(y_new);
      k1.swap(k7);  // first-same-as-last
      consecutive_rejects = 0;
    } else {
      if (++consecutive_rejects > 200)
        throw std::runtime_error(std::string(what) +
                                 ": integrator cannot make progress (stiffness?); "
                                 "loosen tolerances or reduce the Hilbert space");
    }
    dt *= std::clamp(0.9 * std::pow(std::max(err_norm, 1e-10), -0.2), 0.2, 5.0);
    if (dt < dt_min)
      throw std::runtime_error(std::string(what) +
                               ": step size underflow; loosen tolerances or reduce fast "
                               "frequencies / the Hilbert space");
  }
  return y;
}

}  // namespace aqec::detail

#include "aqec/wigner.hpp"

#include "aqec/hilbert.hpp"

#include <numbers>
#include <stdexcept>

namespace aqec {

double WignerGrid::x_of(int ix) const {
  return spec.nx == 1 ? spec.x_min
                      : spec.x_min + (spec.x_max - spec.x_min) * ix / (spec.nx - 1);
}

double WignerGrid::p_of(int ip) const {
  return spec.np == 1 ? spec.p_min
                      : spec.p_min + (spec.p_max - spec.p_min) * ip / (spec.np - 1);
}

double WignerGrid::integral() const {
  const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
  const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
  double sum = 0;
  for (int ip = 0; ip < spec.np; ++ip) {
    for (int ix = 0; ix < spec.nx; ++ix) {
      double w = at(ix, ip);
      double weight = 1.0;
      if (ix == 0 || ix == spec.nx - 1) weight *= 0.5;
      if (ip == 0 || ip == spec.np - 1) weight *= 0.5;
      sum += weight * w;
    }
  }
  return sum * dx * dp;
}

Matrix displacement_operator(int dim, cplx alpha) {
  Matrix a = annihilation(dim);
  Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;  // anti-hermitian
  // exp(gen) = exp(i * (-i gen)) with -i*gen hermitian.
  Matrix herm = cplx(0, -1) * gen;
  return expm_hermitian(herm, cplx(0, 1));
}

namespace {

// <m|D(beta)|n> in closed form (exact, no truncation of the displacement).
cplx displacement_element(int m, int n, cplx beta) {
  const double b2 = std::norm(beta);
  const int lo = std::min(m, n), hi = std::max(m, n), k = hi - lo;
  double ratio = 1.0;  // sqrt(lo! / hi!)
  for (int i = lo + 1; i <= hi; ++i) ratio /= std::sqrt(static_cast<double>(i));
  const double lag = std::assoc_laguerre(lo, k, b2);
  const cplx pref = (m >= n) ? std::pow(beta, k) : std::pow(-std::conj(beta), k);
  return pref * ratio * std::exp(-0.5 * b2) * lag;
}

}  // namespace

WignerGrid wigner(const Matrix& cavity_rho, const WignerGridSpec& grid) {
  const int d = static_cast<int>(cavity_rho.rows());
  if (d < 2 || cavity_rho.cols() != d)
    throw std::invalid_argument("wigner: expected square cavity density matrix");
  const double top_pop = cavity_rho(d - 1, d - 1).real() + cavity_rho(d - 2, d - 2).real();
  if (top_pop > 1e-3)
    throw std::runtime_error(
        "wigner: truncation too small for state (top two Fock levels hold " +
        std::to_string(top_pop) + "); increase cavity_dim");

  WignerGrid out;
  out.spec = grid;
  out.values.assign(static_cast<size_t>(grid.nx) * grid.np, 0.0);

  // W = (1/pi) Tr[rho D(alpha) P D(alpha)^†] = (1/pi) Tr[rho D(2 alpha) P],
  // with the displaced-operator matrix elements taken in closed form so the
  // result is exact for the truncated rho at every grid point.
  parallel_for(grid.np, [&](int ip) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double x = out.x_of(ix);
      const double p = out.p_of(ip);
      const cplx beta = cplx(x, p) * std::sqrt(2.0);  // 2 alpha
      cplx acc = 0.0;
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
          if (std::abs(cavity_rho(n, m)) < 1e-18) continue;
          const double sign = (n % 2 == 0) ? 1.0 : -1.0;
          acc += cavity_rho(n, m) * sign * displacement_element(m, n, beta);
        }
      out.values[static_cast<size_t>(ip) * grid.nx + ix] =
          acc.real() / std::numbers::pi;
    }
  });
  return out;
}

}  // namespace aqec

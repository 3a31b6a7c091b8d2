#include "aqec/dynamics.hpp"

#include "aqec/detail/ode.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace aqec {

Matrix LindbladModel::hamiltonian_at(double t) const {
  Matrix h = hamiltonian;
  for (const auto& c : controls) h += c.coeff(t) * c.op;
  return h;
}

void LindbladModel::validate() const {
  for (auto& [op, rate] : collapse) {
    (void)op;
    if (rate < 0) throw std::invalid_argument("collapse rate must be >= 0");
  }
}


DensityOperator evolve(const LindbladModel& model, const DensityOperator& rho0,
                       double duration, const EvolveOptions& opts) {
  model.validate();
  if (model.hamiltonian.rows() != rho0.rho.rows())
    throw std::invalid_argument("evolve: model and state dimensions differ");

  // Non-hermitian drift A = -iH - 1/2 sum r c^†c, applied as A rho + rho A^†.
  Matrix drift = cplx(0, -1) * model.hamiltonian;
  std::vector<Matrix> jump_ops;
  for (const auto& [op, rate] : model.collapse) {
    if (rate == 0) continue;
    jump_ops.push_back(std::sqrt(rate) * op);
    drift -= 0.5 * rate * (op.adjoint() * op);
  }

  auto rhs = [&](double t, const Matrix& rho) -> Matrix {
    Matrix d = drift;
    if (model.time_dependent()) {
      for (const auto& c : model.controls) d += cplx(0, -1) * c.coeff(t) * c.op;
    }
    Matrix out = d * rho;
    out += out.adjoint().eval();
    for (const auto& c : jump_ops) out += c * rho * c.adjoint();
    return out;
  };

  Matrix rho = detail::integrate_dp54<Matrix>(rhs, rho0.rho, 0.0, duration,
                                              {opts.rtol, opts.atol, opts.initial_dt}, "evolve");
  rho = 0.5 * (rho + rho.adjoint().eval());  // strip integrator asymmetry
  return {rho0.spec, rho};
}

StateVector evolve_no_jump(const LindbladModel& model, const StateVector& psi0,
                           double duration, const EvolveOptions& opts) {
  model.validate();
  Matrix drift = cplx(0, -1) * model.hamiltonian;
  for (const auto& [op, rate] : model.collapse) drift -= 0.5 * rate * (op.adjoint() * op);

  auto rhs = [&](double t, const Vector& psi) -> Vector {
    Vector out = drift * psi;
    if (model.time_dependent()) {
      for (const auto& c : model.controls) out += cplx(0, -1) * c.coeff(t) * (c.op * psi);
    }
    return out;
  };

  Vector psi = detail::integrate_dp54<Vector>(rhs, psi0.amplitudes, 0.0, duration,
                                               {opts.rtol, opts.atol, opts.initial_dt},
                                               "evolve_no_jump");
  const double n = psi.norm();
  if (n < 1e-12) throw std::runtime_error("evolve_no_jump: norm underflow");
  return {psi0.spec, psi / n};
}

Matrix liouvillian_block(const Matrix& h_left, const Matrix& h_right,
                         const std::vector<std::pair<Matrix, double>>& collapse) {
  const int n = static_cast<int>(h_left.rows());
  if (n > 32)
    throw std::invalid_argument("liouvillian: dimension " + std::to_string(n) +
                                " too large for a dense superoperator (cap 32)");
  const Matrix id = Matrix::Identity(n, n);
  Matrix l = cplx(0, -1) * (kron(id, h_left) - kron(h_right.transpose(), id));
  for (const auto& [c, rate] : collapse) {
    if (rate == 0) continue;
    const Matrix cdc = c.adjoint() * c;
    l += rate * (kron(c.conjugate(), c) - 0.5 * kron(id, cdc) -
                 0.5 * kron(cdc.transpose(), id));
  }
  return l;
}

Matrix liouvillian(const Matrix& h, const std::vector<std::pair<Matrix, double>>& collapse) {
  return liouvillian_block(h, h, collapse);
}

Vector vec_of(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, static_cast<int>(v.size()) / rows);
}

Channel Channel::identity(int dim) {
  return Channel(Matrix::Identity(dim * dim, dim * dim));
}

Channel Channel::from_unitary(const Matrix& u) {
  return Channel(kron(u.conjugate(), u));
}

Channel Channel::from_kraus(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("empty Kraus set");
  const int n = static_cast<int>(kraus[0].rows());
  Matrix s = Matrix::Zero(n * n, n * n);
  for (const auto& k : kraus) s += kron(k.conjugate(), k);
  return Channel(std::move(s));
}

Channel Channel::from_liouvillian_exp(const Matrix& liou, double t) {
  return Channel((liou * t).exp());
}

Matrix Channel::apply(const Matrix& rho) const {
  return unvec(s_ * vec_of(rho), static_cast<int>(rho.rows()));
}

Channel Channel::compose_after(const Channel& other) const {
  return Channel(s_ * other.s_);
}

}  // namespace aqec

#include "aqec/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace aqec {

void HilbertSpec::validate() const {
  if (cavity_dim < 2) throw std::invalid_argument("cavity_dim must be >= 2");
  if (qubit_dim != 2 && qubit_dim != 3)
    throw std::invalid_argument("qubit_dim must be 2 or 3");
  if (resonator_dim < 1) throw std::invalid_argument("resonator_dim must be >= 1");
  if (total() > max_total)
    throw std::invalid_argument("total Hilbert dimension " + std::to_string(total()) +
                                " exceeds cap " + std::to_string(max_total));
}

void StateVector::check_normalized(double tol) const {
  if (std::abs(norm() - 1.0) > tol)
    throw std::runtime_error("state vector not normalized: |psi| = " +
                             std::to_string(norm()));
}

void DensityOperator::check_valid(double trace_tol, double eig_tol) const {
  if (std::abs(trace_real() - 1.0) > trace_tol)
    throw std::runtime_error("density operator trace = " + std::to_string(trace_real()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  if (es.eigenvalues().minCoeff() < -eig_tol)
    throw std::runtime_error("density operator has negative eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()));
}

DensityOperator to_density(const StateVector& psi) {
  return {psi.spec, psi.amplitudes * psi.amplitudes.adjoint()};
}

Matrix annihilation(int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number_op(int d) {
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = k;
  return n;
}

Matrix fock_parity(int d) {
  Matrix p = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return p;
}

Matrix embed(const HilbertSpec& spec, Subsystem which, const Matrix& op) {
  const Matrix ic = Matrix::Identity(spec.cavity_dim, spec.cavity_dim);
  const Matrix iq = Matrix::Identity(spec.qubit_dim, spec.qubit_dim);
  const Matrix ir = Matrix::Identity(spec.resonator_dim, spec.resonator_dim);
  switch (which) {
    case Subsystem::Cavity:
      if (op.rows() != spec.cavity_dim) throw std::invalid_argument("embed: bad cavity op dim");
      return kron(kron(op, iq), ir);
    case Subsystem::Qubit:
      if (op.rows() != spec.qubit_dim) throw std::invalid_argument("embed: bad qubit op dim");
      return kron(kron(ic, op), ir);
    case Subsystem::Resonator:
      if (op.rows() != spec.resonator_dim)
        throw std::invalid_argument("embed: bad resonator op dim");
      return kron(kron(ic, iq), op);
  }
  throw std::logic_error("unreachable");
}

OperatorSet build_operators(const HilbertSpec& spec) {
  spec.validate();
  OperatorSet ops;
  ops.spec = spec;
  ops.a_c = embed(spec, Subsystem::Cavity, annihilation(spec.cavity_dim));
  ops.a_q = embed(spec, Subsystem::Qubit, annihilation(spec.qubit_dim));
  ops.a_r = embed(spec, Subsystem::Resonator, annihilation(spec.resonator_dim));
  ops.n_c = embed(spec, Subsystem::Cavity, number_op(spec.cavity_dim));
  ops.n_q = embed(spec, Subsystem::Qubit, number_op(spec.qubit_dim));
  ops.n_r = embed(spec, Subsystem::Resonator, number_op(spec.resonator_dim));
  ops.parity_c = embed(spec, Subsystem::Cavity, fock_parity(spec.cavity_dim));
  ops.identity = Matrix::Identity(spec.total(), spec.total());
  if (spec.qubit_dim == 2) {
    Matrix sx(2, 2), sy(2, 2), sz(2, 2), sp(2, 2), sm(2, 2);
    // basis order {|g>, |e>}; sz|e> = +|e>
    sx << 0, 1, 1, 0;
    sy << 0, cplx(0, -1), cplx(0, 1), 0;
    sz << -1, 0, 0, 1;
    sp << 0, 0, 1, 0;  // |e><g|
    sm << 0, 1, 0, 0;  // |g><e|
    ops.sx = embed(spec, Subsystem::Qubit, sx);
    ops.sy = embed(spec, Subsystem::Qubit, sy);
    ops.sz = embed(spec, Subsystem::Qubit, sz);
    ops.sp = embed(spec, Subsystem::Qubit, sp);
    ops.sm = embed(spec, Subsystem::Qubit, sm);
  }
  return ops;
}

Matrix partial_trace(const Matrix& rho, const HilbertSpec& spec, Subsystem keep) {
  const int dc = spec.cavity_dim, dq = spec.qubit_dim, dr = spec.resonator_dim;
  auto idx = [&](int c, int q, int r) { return (c * dq + q) * dr + r; };
  int dim_keep = keep == Subsystem::Cavity ? dc : (keep == Subsystem::Qubit ? dq : dr);
  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (int c1 = 0; c1 < dc; ++c1)
    for (int q1 = 0; q1 < dq; ++q1)
      for (int r1 = 0; r1 < dr; ++r1)
        for (int c2 = 0; c2 < dc; ++c2)
          for (int q2 = 0; q2 < dq; ++q2)
            for (int r2 = 0; r2 < dr; ++r2) {
              bool diag;
              int i, j;
              switch (keep) {
                case Subsystem::Cavity:
                  diag = (q1 == q2 && r1 == r2);
                  i = c1;
                  j = c2;
                  break;
                case Subsystem::Qubit:
                  diag = (c1 == c2 && r1 == r2);
                  i = q1;
                  j = q2;
                  break;
                default:
                  diag = (c1 == c2 && q1 == q2);
                  i = r1;
                  j = r2;
              }
              if (diag) out(i, j) += rho(idx(c1, q1, r1), idx(c2, q2, r2));
            }
  return out;
}

Matrix partial_trace(const DensityOperator& state, Subsystem keep) {
  return partial_trace(state.rho, state.spec, keep);
}

StateVector basis_state(const HilbertSpec& spec, int n_cavity, int qubit_level,
                        int n_resonator) {
  if (n_cavity >= spec.cavity_dim || qubit_level >= spec.qubit_dim ||
      n_resonator >= spec.resonator_dim)
    throw std::invalid_argument("basis_state index outside truncation");
  Vector v = Vector::Zero(spec.total());
  v((n_cavity * spec.qubit_dim + qubit_level) * spec.resonator_dim + n_resonator) = 1.0;
  return {spec, v};
}

StateVector lift_cavity(const HilbertSpec& spec, const Vector& cavity_vec,
                        int qubit_level) {
  if (cavity_vec.size() > spec.cavity_dim)
    throw std::invalid_argument("cavity vector larger than truncation");
  Vector v = Vector::Zero(spec.total());
  for (int n = 0; n < cavity_vec.size(); ++n)
    v((n * spec.qubit_dim + qubit_level) * spec.resonator_dim) = cavity_vec(n);
  return {spec, v};
}

}  // namespace aqec

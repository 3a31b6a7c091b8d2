#pragma once

#include "aqec/hilbert.hpp"

#include <functional>
#include <vector>

namespace aqec {

/// Time-dependent Hamiltonian term u(t) * op.
struct ControlTerm {
  Matrix op;
  std::function<double(double)> coeff;
};

/// rho' = -i[H(t), rho] + sum_k rate_k D[op_k] with D[c]r = c r c^† - {c^†c, r}/2.
struct LindbladModel {
  HilbertSpec spec;
  Matrix hamiltonian;                               // static part, rad/us
  std::vector<ControlTerm> controls;                // optional drive terms
  std::vector<std::pair<Matrix, double>> collapse;  // (operator, rate >= 0)

  bool time_dependent() const { return !controls.empty(); }
  Matrix hamiltonian_at(double t) const;
  void validate() const;
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_dt = 0.0;  // 0 = auto
};

/// Adaptive Dormand-Prince 5(4) integration of the master equation.
/// Deterministic for fixed tolerances. Throws on step-size underflow with a
/// hint to loosen tolerances or shrink the space.
DensityOperator evolve(const LindbladModel& model, const DensityOperator& rho0,
                       double duration, const EvolveOptions& opts = {});

/// Conditional no-jump evolution exp[(-iH - sum_k rate_k op_k^†op_k / 2) t]
/// of a pure state, renormalized. Throws on norm underflow.
StateVector evolve_no_jump(const LindbladModel& model, const StateVector& psi0,
                           double duration, const EvolveOptions& opts = {});

/// Liouvillian superoperator acting on column-major vec(rho). Only built for
/// small spaces (dim <= 32): dim^2 x dim^2.
Matrix liouvillian(const Matrix& h, const std::vector<std::pair<Matrix, double>>& collapse);

/// Generator for an off-diagonal sector X evolving as
/// X' = -i(H_left X - X H_right) + sum_k rate_k (c X c^† - {c^†c, X}/2).
Matrix liouvillian_block(const Matrix& h_left, const Matrix& h_right,
                         const std::vector<std::pair<Matrix, double>>& collapse);

Vector vec_of(const Matrix& m);
Matrix unvec(const Vector& v, int rows);

/// A CPTP map stored as a dense superoperator on vec(rho), with helpers for
/// composing unitaries and Kraus maps. Used for precomputed cycle channels.
class Channel {
 public:
  Channel() = default;
  explicit Channel(Matrix superop) : s_(std::move(superop)) {}
  static Channel identity(int dim);
  static Channel from_unitary(const Matrix& u);
  static Channel from_kraus(const std::vector<Matrix>& kraus);
  static Channel from_liouvillian_exp(const Matrix& liou, double t);

  Matrix apply(const Matrix& rho) const;
  /// this ∘ other (other acts first).
  Channel compose_after(const Channel& other) const;
  const Matrix& superop() const { return s_; }
  int dim() const { return static_cast<int>(std::lround(std::sqrt(double(s_.rows())))); }

 private:
  Matrix s_;
};

}  // namespace aqec

#pragma once

#include "aqec/math.hpp"

#include <string>

namespace aqec {

/// Truncated tensor-product space: cavity (x) qubit (x) resonator, in that
/// fixed order. resonator_dim = 1 means the resonator is traced out.
struct HilbertSpec {
  int cavity_dim = 2;
  int qubit_dim = 2;
  int resonator_dim = 1;
  int max_total = 4096;

  int total() const { return cavity_dim * qubit_dim * resonator_dim; }
  void validate() const;

  bool operator==(const HilbertSpec& o) const {
    return cavity_dim == o.cavity_dim && qubit_dim == o.qubit_dim &&
           resonator_dim == o.resonator_dim;
  }
};

struct FockOperator {
  HilbertSpec spec;
  Matrix mat;
};

struct StateVector {
  HilbertSpec spec;
  Vector amplitudes;

  double norm() const { return amplitudes.norm(); }
  void check_normalized(double tol = 1e-10) const;
};

struct DensityOperator {
  HilbertSpec spec;
  Matrix rho;

  double trace_real() const { return rho.trace().real(); }
  void check_valid(double trace_tol = 1e-10, double eig_tol = 1e-9) const;
};

DensityOperator to_density(const StateVector& psi);

enum class Subsystem { Cavity, Qubit, Resonator };

/// Single-subsystem annihilation operator, dimension d.
Matrix annihilation(int d);
Matrix number_op(int d);
Matrix fock_parity(int d);

/// Embeds a single-subsystem operator into the full tensor space.
Matrix embed(const HilbertSpec& spec, Subsystem which, const Matrix& op);

/// The operator set every other module works from.
struct OperatorSet {
  HilbertSpec spec;
  Matrix a_c, a_q, a_r;        // annihilation, embedded
  Matrix n_c, n_q, n_r;        // number operators, embedded
  Matrix parity_c;             // exp(i pi n_c), embedded
  Matrix sx, sy, sz, sp, sm;   // qubit Paulis / ladder (qubit_dim == 2 only)
  Matrix identity;
};

OperatorSet build_operators(const HilbertSpec& spec);

/// Reduced density matrix of one subsystem.
Matrix partial_trace(const DensityOperator& state, Subsystem keep);
Matrix partial_trace(const Matrix& rho, const HilbertSpec& spec, Subsystem keep);

/// Cavity Fock state |n> embedded as cavity (x) |qubit_level> (x) |0_r>.
StateVector basis_state(const HilbertSpec& spec, int n_cavity, int qubit_level = 0,
                        int n_resonator = 0);

/// Lifts a cavity-only vector to the full space with the qubit in
/// |qubit_level> and resonator in vacuum.
StateVector lift_cavity(const HilbertSpec& spec, const Vector& cavity_vec,
                        int qubit_level = 0);

}  // namespace aqec

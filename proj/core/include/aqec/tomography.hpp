#pragma once

#include "aqec/math.hpp"

#include <array>
#include <functional>

namespace aqec {

/// Process matrix of a single-logical-qubit channel in the Pauli basis
/// {I, X, Y, Z}: E(rho) = sum_mn chi[m][n] P_m rho P_n.
struct ChiMatrix {
  Eigen::Matrix4cd chi;
  double choi_min_eigenvalue = 0.0;  // most negative Choi eigenvalue found

  double trace_real() const { return chi.trace().real(); }
};

using LogicalChannel = std::function<Matrix(const Matrix&)>;  // 2x2 -> 2x2

/// Reconstructs chi by linear inversion from the four input states
/// {|g>, |e>, (|g>+|e>)/sqrt2, (|g>-i|e>)/sqrt2}. Throws if the
/// reconstruction is grossly unphysical (Choi min eigenvalue < -1e-6).
ChiMatrix process_tomography(const LogicalChannel& channel);

/// Same reconstruction from the four already-evolved outputs (in the input
/// order |g>, |e>, (|g>+|e>)/sqrt2, (|g>-i|e>)/sqrt2).
ChiMatrix chi_from_outputs(const std::array<Matrix, 4>& outputs);

/// Tr(chi_ideal * chi); the ideal channel of a unitary target.
double process_fidelity(const ChiMatrix& chi, const ChiMatrix& ideal);

ChiMatrix chi_identity();
ChiMatrix chi_of_unitary(const Eigen::Matrix2cd& u);

std::array<Eigen::Matrix2cd, 4> pauli_basis();

}  // namespace aqec

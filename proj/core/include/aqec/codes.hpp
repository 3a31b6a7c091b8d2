#pragma once

#include "aqec/math.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aqec {

/// A bosonic code on the cavity alone. Logical and error basis vectors are
/// cavity Fock-space vectors of length `dim`. Error subspaces are ordered as
/// (image of |0_L>, image of |1_L>) under the corresponding error operator,
/// so recovery targets are generated deterministically: error basis state i
/// maps back to logical basis state i.
struct CodeSpec {
  std::string name;
  int dim = 0;
  Vector logical_zero;
  Vector logical_one;
  std::vector<std::pair<Vector, Vector>> error_subspaces;
  std::vector<std::string> correctable_errors;  // labels like "I", "a", "a^2", "n"
  double average_photon_number = 0.0;
  /// +1 when the code space has definite even parity and the first error
  /// space odd parity; unset when no parity structure is claimed.
  std::optional<int> code_parity;
  /// True when the recovery is only approximate (spec deformation allowed).
  bool approximate = false;

  Vector logical(int i) const { return i == 0 ? logical_zero : logical_one; }
  Vector plus_x() const;
  Vector minus_y() const;
  void check_invariants(double tol = 1e-10) const;
};

struct KLReport {
  std::vector<std::string> error_labels;
  /// residuals[k][l] = max-norm deviation of <i|E_k^† E_l|j> from c_kl * I,
  /// with each E_k scaled to unit code-averaged norm.
  std::vector<std::vector<double>> residuals;
  double worst_residual = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

CodeSpec binomial_lowest();
CodeSpec sqrt17();
/// Two-component Fock probe code (|m> + e^{i phi}|n>)/sqrt(2); for m >= 1 the
/// photon-loss error subspace is populated and the (deformed) recovery maps
/// |m-1> -> |m>, |n-1> -> |n>.
CodeSpec fock_superposition(int m, int n);
/// A code of the binomial family correcting L photon losses, G gains and
/// D dephasing events; spacing S = L + G, order N = max(L, G, 2D).
CodeSpec generalized_binomial(int losses, int gains, int dephasings,
                              int max_fock_cap = 64);
/// Bare two-level encoding used as the transmon baseline (dim 2, no cavity).
CodeSpec transmon_code();

/// Error operators by label in a d-dimensional Fock space. Supported labels:
/// "I", "a", "a^k", "ad", "ad^k", "n", "n^k".
Matrix error_operator(const std::string& label, int dim);

KLReport kl_check(const CodeSpec& code, const std::vector<std::string>& errors,
                  double tolerance = 1e-9);

/// Distorted logical basis under conditional no-loss evolution
/// exp(-kappa/2 n t): returns the two normalized deformed codewords.
/// For the lowest binomial code the |0>:|4> amplitude ratio is
/// cos(theta):sin(theta) with tan(theta) = exp(-2 kappa t).
struct NoJumpMap {
  Vector zero;
  Vector one;
  double theta = 0.0;  // binomial-parameterization angle, atan(exp(-2 kappa t))
};
NoJumpMap no_jump_map(const CodeSpec& code, double kappa_c, double t_wait);

std::string code_to_json(const CodeSpec& code);
CodeSpec code_from_json(const std::string& json_text);

/// Named lookup used by the CLI: binomial, sqrt17, fock01, fock14, transmon.
CodeSpec code_by_name(const std::string& name);
std::vector<std::string> known_code_names();

}  // namespace aqec

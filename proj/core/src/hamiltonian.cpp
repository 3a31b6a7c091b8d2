#include "aqec/hamiltonian.hpp"

#include <stdexcept>

namespace aqec {

FockOperator system_hamiltonian(const DeviceParams& params, const HilbertSpec& spec,
                                FrameChoice frame) {
  spec.validate();
  params.validate();
  OperatorSet ops = build_operators(spec);

  const double kerr_c = mhz_to_angular(params.kerr_c_mhz);
  const double chi_qc = mhz_to_angular(params.chi_qc_mhz);
  const double chi_qr = mhz_to_angular(params.chi_qr_mhz);
  const double chi2_qc = mhz_to_angular(params.chi2_qc_mhz);

  const Matrix ad2a2_c = ops.a_c.adjoint() * ops.a_c.adjoint() * ops.a_c * ops.a_c;

  Matrix h = -0.5 * kerr_c * ad2a2_c - chi_qc * (ops.n_q * ops.n_c) +
             0.5 * chi2_qc * (ops.n_q * ad2a2_c);
  if (spec.resonator_dim > 1) h -= chi_qr * (ops.n_q * ops.n_r);

  switch (frame) {
    case FrameChoice::DispersiveTwoLevel:
      if (spec.qubit_dim != 2)
        throw std::invalid_argument("dispersive-two-level frame requires qubit_dim = 2");
      break;
    case FrameChoice::FullLab: {
      if (!params.omega_c_mhz || !params.omega_q_mhz || !params.omega_r_mhz)
        throw std::invalid_argument("full lab frame requires mode frequencies");
      const double kerr_q = mhz_to_angular(params.kerr_q_mhz);
      const Matrix ad2a2_q = ops.a_q.adjoint() * ops.a_q.adjoint() * ops.a_q * ops.a_q;
      h += mhz_to_angular(*params.omega_c_mhz) * ops.n_c +
           mhz_to_angular(*params.omega_q_mhz) * ops.n_q +
           mhz_to_angular(*params.omega_r_mhz) * ops.n_r - 0.5 * kerr_q * ad2a2_q;
      break;
    }
    default:
      throw std::invalid_argument("unknown frame choice");
  }
  return {spec, h};
}

RealVector cavity_diagonal_energies(const DeviceParams& params, int cavity_dim) {
  const double kerr_c = mhz_to_angular(params.kerr_c_mhz);
  RealVector e(cavity_dim);
  for (int n = 0; n < cavity_dim; ++n) e(n) = -0.5 * kerr_c * n * (n - 1);
  return e;
}

}  // namespace aqec

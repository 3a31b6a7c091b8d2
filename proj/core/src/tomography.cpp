#include "aqec/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace aqec {

std::array<Eigen::Matrix2cd, 4> pauli_basis() {
  Eigen::Matrix2cd id, x, y, z;
  id << 1, 0, 0, 1;
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  return {id, x, y, z};
}

ChiMatrix process_tomography(const LogicalChannel& channel) {
  Eigen::Matrix2cd gg, ee, plus, minus_i;
  gg << 1, 0, 0, 0;
  ee << 0, 0, 0, 1;
  plus << 0.5, 0.5, 0.5, 0.5;
  minus_i << 0.5, cplx(0, 0.5), cplx(0, -0.5), 0.5;

  std::array<Matrix, 4> out;
  const Matrix inputs[4] = {gg, ee, plus, minus_i};
  parallel_for(4, [&](int i) { out[i] = channel(inputs[i]); });
  return chi_from_outputs(out);
}

ChiMatrix chi_from_outputs(const std::array<Matrix, 4>& out) {

  // Recover the channel action on |g><e| and |e><g| by linearity.
  const Matrix s = out[0] + out[1];
  const Matrix e_ge = (2.0 * out[2] - s) * 0.5 + cplx(0, -0.5) * (2.0 * out[3] - s);
  const Matrix e_eg = (2.0 * out[2] - s) * 0.5 + cplx(0, 0.5) * (2.0 * out[3] - s);

  // Superoperator on vec(rho), column-major: columns indexed by (k + 2l)
  // carry E(|k><l|).
  Eigen::Matrix4cd m;
  auto put = [&](int k, int l, const Matrix& img) {
    m.col(k + 2 * l) = Eigen::Map<const Eigen::Vector4cd>(Matrix(img).data());
  };
  put(0, 0, out[0]);
  put(1, 1, out[1]);
  put(0, 1, e_ge);
  put(1, 0, e_eg);

  // chi_mn = Tr[(P_n^T (x) P_m)^† M] / 4.
  auto paulis = pauli_basis();
  ChiMatrix result;
  for (int mm = 0; mm < 4; ++mm)
    for (int nn = 0; nn < 4; ++nn) {
      Matrix basis = kron(Matrix(paulis[nn].transpose()), Matrix(paulis[mm]));
      result.chi(mm, nn) = (basis.adjoint() * m).trace() / 4.0;
    }

  // Choi matrix J[(i,k),(j,l)] = M[(i,j),(k,l)]; column-major index (i + 2j).
  Eigen::Matrix4cd choi;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) choi(i + 2 * k, j + 2 * l) = m(i + 2 * j, k + 2 * l);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (choi + choi.adjoint()));
  result.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  if (result.choi_min_eigenvalue < -1e-6)
    throw std::runtime_error("process_tomography: non-physical reconstruction (Choi "
                             "min eigenvalue " +
                             std::to_string(result.choi_min_eigenvalue) + ")");
  return result;
}

double process_fidelity(const ChiMatrix& chi, const ChiMatrix& ideal) {
  return (ideal.chi * chi.chi).trace().real();
}

ChiMatrix chi_identity() {
  ChiMatrix c;
  c.chi.setZero();
  c.chi(0, 0) = 1.0;
  return c;
}

ChiMatrix chi_of_unitary(const Eigen::Matrix2cd& u) {
  auto paulis = pauli_basis();
  Eigen::Vector4cd coeffs;
  for (int m = 0; m < 4; ++m) coeffs(m) = (paulis[m].adjoint() * u).trace() / 2.0;
  ChiMatrix c;
  c.chi = coeffs * coeffs.adjoint();
  return c;
}

}  // namespace aqec

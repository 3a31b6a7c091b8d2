#include "aqec/device.hpp"

#include "aqec/math.hpp"

#include <stdexcept>

namespace aqec {

double DeviceParams::kappa_r_mhz() const { return kappa_r() / kTwoPi; }

void DeviceParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw std::invalid_argument(std::string("device: ") + name + " must be > 0");
  };
  positive(t1_c_us, "t1_c_us");
  positive(tphi_c_us, "tphi_c_us");
  positive(t1_q_us, "t1_q_us");
  positive(tphi_q_us, "tphi_q_us");
  positive(t1_r_us, "t1_r_us");
  auto rate = [](double v, const char* name) {
    if (v < 0) throw std::invalid_argument(std::string("device: ") + name + " must be >= 0");
  };
  rate(kerr_c_mhz, "kerr_c_mhz");
  rate(chi_qc_mhz, "chi_qc_mhz");
  rate(chi_qr_mhz, "chi_qr_mhz");
  auto population = [](double v, const char* name) {
    if (v < 0 || v >= 0.5)
      throw std::invalid_argument(std::string("device: ") + name + " must be in [0, 0.5)");
  };
  population(n_th_c, "n_th_c");
  population(n_th_q, "n_th_q");
}

DeviceParams device_table_defaults() {
  DeviceParams d;
  d.omega_c_mhz = 6611.0;
  d.omega_q_mhz = 5478.0;
  d.omega_r_mhz = 8578.0;
  d.kerr_c_mhz = 1.0e-3;
  d.kerr_q_mhz = 221.0;
  d.chi_qc_mhz = 0.88;
  d.chi_qr_mhz = 3.0;
  d.chi2_qc_mhz = 0.97e-3;
  d.t1_c_us = 1400.0;
  d.tphi_c_us = 6500.0;
  d.t1_q_us = 133.0;
  d.tphi_q_us = 388.0;
  d.t1_r_us = 0.113;
  d.n_th_c = 0.002;
  d.n_th_q = 0.012;
  return d;
}

}  // namespace aqec

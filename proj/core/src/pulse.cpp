#include "aqec/pulse.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace aqec {

double PulseSchedule::max_amplitude() const {
  double m = 0;
  for (const auto& ch : channels)
    for (double v : ch) m = std::max(m, std::abs(v));
  return m;
}

double PulseSchedule::fourier_value(const RealVector& coeffs, double delta_f_mhz,
                                    double t_ns, const TransferFunction& transfer) {
  const int modes = static_cast<int>((coeffs.size() - 1) / 2);
  double v = coeffs(0) * transfer(0.0);
  const double t_us = t_ns * 1e-3;
  for (int k = 1; k <= modes; ++k) {
    const double f = k * delta_f_mhz;
    const double phase = kTwoPi * f * t_us;
    v += transfer(f) * (coeffs(2 * k - 1) * std::cos(phase) + coeffs(2 * k) * std::sin(phase));
  }
  return v;
}

void PulseSchedule::synthesize(const TransferFunction& transfer) {
  if (form != PulseForm::Fourier)
    throw std::logic_error("synthesize: schedule is not Fourier-parameterized");
  const int n = steps();
  for (int ch = 0; ch < 4; ++ch) {
    if (coefficients[ch].size() != 2 * modes + 1)
      throw std::invalid_argument("synthesize: coefficient vector has wrong size");
    channels[ch].resize(n);
    for (int j = 0; j < n; ++j) {
      const double t = (j + 0.5) * dt_ns;
      channels[ch][j] = fourier_value(coefficients[ch], delta_f_mhz, t, transfer);
    }
  }
}

RealVector PulseSchedule::project_fourier(const std::vector<double>& samples, double dt_ns,
                                          double delta_f_mhz, int modes) {
  const int n = static_cast<int>(samples.size());
  const int p = 2 * modes + 1;
  Eigen::MatrixXd basis(n, p);
  for (int j = 0; j < n; ++j) {
    const double t_us = (j + 0.5) * dt_ns * 1e-3;
    basis(j, 0) = 1.0;
    for (int k = 1; k <= modes; ++k) {
      const double phase = kTwoPi * k * delta_f_mhz * t_us;
      basis(j, 2 * k - 1) = std::cos(phase);
      basis(j, 2 * k) = std::sin(phase);
    }
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(samples.data(), n);
  return basis.colPivHouseholderQr().solve(y);
}

namespace {
const char* kChannelNames[4] = {"qI", "qQ", "cI", "cQ"};
}

std::string PulseSchedule::to_json() const {
  nlohmann::json j;
  j["dt_ns"] = dt_ns;
  nlohmann::json chans;
  for (int ch = 0; ch < 4; ++ch) chans[kChannelNames[ch]] = channels[ch];
  j["channels"] = chans;
  if (form == PulseForm::Fourier) {
    nlohmann::json par;
    par["kind"] = "fourier";
    par["delta_f_mhz"] = delta_f_mhz;
    par["modes"] = modes;
    for (int ch = 0; ch < 4; ++ch) {
      std::vector<double> c(coefficients[ch].data(),
                            coefficients[ch].data() + coefficients[ch].size());
      par["coefficients"][kChannelNames[ch]] = c;
    }
    j["parameterization"] = par;
  } else {
    j["parameterization"] = {{"kind", "piecewise"}};
  }
  j["amplitude_cap_mhz"] = amplitude_cap_mhz;
  return j.dump(2);
}

PulseSchedule PulseSchedule::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PulseSchedule s;
  s.dt_ns = j.at("dt_ns").get<double>();
  for (int ch = 0; ch < 4; ++ch)
    s.channels[ch] = j.at("channels").at(kChannelNames[ch]).get<std::vector<double>>();
  if (j.contains("amplitude_cap_mhz")) s.amplitude_cap_mhz = j["amplitude_cap_mhz"];
  const auto& par = j.at("parameterization");
  if (par.at("kind") == "fourier") {
    s.form = PulseForm::Fourier;
    s.delta_f_mhz = par.at("delta_f_mhz").get<double>();
    s.modes = par.at("modes").get<int>();
    for (int ch = 0; ch < 4; ++ch) {
      auto c = par.at("coefficients").at(kChannelNames[ch]).get<std::vector<double>>();
      s.coefficients[ch] = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
    }
  }
  return s;
}

void TransferTarget::validate(double tol) const {
  if (inputs.empty() || inputs.size() != outputs.size())
    throw std::invalid_argument("transfer target: empty or mismatched state lists");
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (size_t j = 0; j < inputs.size(); ++j) {
      const cplx gi = inputs[i].dot(inputs[j]);
      const cplx go = outputs[i].dot(outputs[j]);
      const cplx expect = i == j ? 1.0 : 0.0;
      if (std::abs(gi - expect) > tol)
        throw std::invalid_argument("transfer target: inputs not orthonormal");
      if (std::abs(go - expect) > tol)
        throw std::invalid_argument("transfer target: outputs not orthonormal");
    }
  }
}

}  // namespace aqec

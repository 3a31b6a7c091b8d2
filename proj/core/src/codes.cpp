#include "aqec/codes.hpp"

#include "aqec/hilbert.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace aqec {

namespace {

Vector fock_vec(int dim, std::initializer_list<std::pair<int, double>> amps) {
  Vector v = Vector::Zero(dim);
  for (auto& [n, a] : amps) v(n) = a;
  return v;
}

double mean_photon(const Vector& v) {
  double s = 0;
  for (int n = 0; n < v.size(); ++n) s += n * std::norm(v(n));
  return s;
}

Vector apply_and_normalize(const Matrix& op, const Vector& v) {
  Vector w = op * v;
  double nrm = w.norm();
  if (nrm < 1e-14) throw std::runtime_error("error operator annihilates codeword");
  return w / nrm;
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

Vector CodeSpec::plus_x() const {
  Vector v = (logical_zero + logical_one) / std::sqrt(2.0);
  return v;
}

Vector CodeSpec::minus_y() const {
  Vector v = (logical_zero - cplx(0, 1) * logical_one) / std::sqrt(2.0);
  return v;
}

void CodeSpec::check_invariants(double tol) const {
  auto unit = [&](const Vector& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > tol)
      throw std::runtime_error(name + ": " + what + " not unit norm");
  };
  unit(logical_zero, "logical_zero");
  unit(logical_one, "logical_one");
  if (std::abs(logical_zero.dot(logical_one)) > 1e-12)
    throw std::runtime_error(name + ": codewords not orthogonal");
  for (auto& [e0, e1] : error_subspaces) {
    unit(e0, "error basis");
    unit(e1, "error basis");
    if (std::abs(e0.dot(e1)) > 1e-10)
      throw std::runtime_error(name + ": error basis not orthogonal");
  }
}

CodeSpec binomial_lowest() {
  CodeSpec c;
  c.name = "binomial";
  c.dim = 12;
  const double s = 1.0 / std::sqrt(2.0);
  c.logical_zero = fock_vec(c.dim, {{0, s}, {4, s}});
  c.logical_one = fock_vec(c.dim, {{2, 1.0}});
  c.error_subspaces.push_back({fock_vec(c.dim, {{3, 1.0}}), fock_vec(c.dim, {{1, 1.0}})});
  c.correctable_errors = {"I", "a"};
  c.average_photon_number = 2.0;
  c.code_parity = +1;
  return c;
}

CodeSpec sqrt17() {
  CodeSpec c;
  c.name = "sqrt17";
  c.dim = 12;
  const double r17 = std::sqrt(17.0);
  const double n0a = std::sqrt(7.0 - r17), n0b = std::sqrt(r17 - 1.0);
  const double n1a = std::sqrt(9.0 - r17), n1b = std::sqrt(r17 - 3.0);
  const double inv6 = 1.0 / std::sqrt(6.0);
  c.logical_zero = fock_vec(c.dim, {{0, n0a * inv6}, {3, n0b * inv6}});
  c.logical_one = fock_vec(c.dim, {{1, n1a * inv6}, {4, -n1b * inv6}});
  // error states: normalized images under a (the second equals
  // (sqrt(sqrt17-1)|0> - sqrt(7-sqrt17)|3>)/sqrt(6) identically).
  Matrix a = annihilation(c.dim);
  c.error_subspaces.push_back(
      {apply_and_normalize(a, c.logical_zero), apply_and_normalize(a, c.logical_one)});
  c.correctable_errors = {"I", "a"};
  c.average_photon_number = mean_photon(c.logical_zero);
  return c;
}

CodeSpec fock_superposition(int m, int n) {
  if (!(0 <= m && m < n)) throw std::invalid_argument("fock_superposition requires 0 <= m < n");
  CodeSpec c;
  c.name = "fock" + std::to_string(m) + std::to_string(n);
  c.dim = std::max(n + 2, 6);
  c.logical_zero = fock_vec(c.dim, {{m, 1.0}});
  c.logical_one = fock_vec(c.dim, {{n, 1.0}});
  c.average_photon_number = 0.5 * (m + n);
  c.approximate = true;
  if (m >= 1) {
    // photon-loss image basis; recovery maps |m-1> -> |m>, |n-1> -> |n>,
    // reproducing the deformed-state transfer by linearity.
    c.error_subspaces.push_back(
        {fock_vec(c.dim, {{m - 1, 1.0}}), fock_vec(c.dim, {{n - 1, 1.0}})});
    c.correctable_errors = {"I", "a"};
  }
  return c;
}

CodeSpec generalized_binomial(int losses, int gains, int dephasings, int max_fock_cap) {
  if (losses < 0 || gains < 0 || dephasings < 0 || (losses + gains + dephasings) == 0)
    throw std::invalid_argument("generalized_binomial: counts must be >= 0, not all zero");
  const int spacing = losses + gains;
  const int order = std::max({losses, gains, 2 * dephasings});
  const int step = spacing + 1;
  const int max_fock = (order + 1) * step;
  if (max_fock + gains >= max_fock_cap)
    throw std::invalid_argument("generalized_binomial: max Fock index " +
                                std::to_string(max_fock + gains) + " exceeds cap");
  CodeSpec c;
  c.name = "gbin_L" + std::to_string(losses) + "G" + std::to_string(gains) + "D" +
           std::to_string(dephasings);
  c.dim = max_fock + gains + 2;
  const double norm = std::pow(2.0, -0.5 * order);
  Vector zero = Vector::Zero(c.dim), one = Vector::Zero(c.dim);
  for (int p = 0; p <= order + 1; ++p) {
    const double amp = norm * std::sqrt(static_cast<double>(binom(order + 1, p)));
    if (p % 2 == 0)
      zero(p * step) = amp;
    else
      one(p * step) = amp;
  }
  c.logical_zero = zero;
  c.logical_one = one;
  c.average_photon_number = mean_photon(zero);

  Matrix a = annihilation(c.dim);
  for (int k = 1; k <= losses; ++k) {
    Matrix ak = Matrix::Identity(c.dim, c.dim);
    for (int i = 0; i < k; ++i) ak = a * ak;
    c.error_subspaces.push_back(
        {apply_and_normalize(ak, zero), apply_and_normalize(ak, one)});
    c.correctable_errors.push_back(k == 1 ? "a" : "a^" + std::to_string(k));
  }
  if (spacing == 1 && gains == 0 && dephasings == 0) c.code_parity = +1;
  return c;
}

CodeSpec transmon_code() {
  CodeSpec c;
  c.name = "transmon";
  c.dim = 2;
  c.logical_zero = fock_vec(2, {{0, 1.0}});
  c.logical_one = fock_vec(2, {{1, 1.0}});
  c.average_photon_number = 0.5;
  return c;
}

Matrix error_operator(const std::string& label, int dim) {
  auto power_of = [&](const Matrix& base, int k) {
    Matrix out = Matrix::Identity(dim, dim);
    for (int i = 0; i < k; ++i) out = base * out;
    return out;
  };
  if (label == "I") return Matrix::Identity(dim, dim);
  auto parse_power = [&](const std::string& stem) -> int {
    if (label == stem) return 1;
    if (label.rfind(stem + "^", 0) == 0) return std::stoi(label.substr(stem.size() + 1));
    return 0;
  };
  if (int k = parse_power("a"); k > 0) return power_of(annihilation(dim), k);
  if (int k = parse_power("ad"); k > 0) return power_of(annihilation(dim).adjoint(), k);
  if (int k = parse_power("n"); k > 0) return power_of(number_op(dim), k);
  throw std::invalid_argument("unknown error operator label: " + label);
}

KLReport kl_check(const CodeSpec& code, const std::vector<std::string>& errors,
                  double tolerance) {
  KLReport rep;
  rep.error_labels = errors;
  rep.tolerance = tolerance;
  const int ne = static_cast<int>(errors.size());
  std::vector<Matrix> ops;
  ops.reserve(ne);
  // Scale each operator to unit code-averaged norm so residuals are
  // comparable across operators (identity stays unscaled).
  for (const auto& label : errors) {
    Matrix e = error_operator(label, code.dim);
    double avg = 0.5 * ((e * code.logical_zero).squaredNorm() +
                        (e * code.logical_one).squaredNorm());
    if (avg > 1e-14) e /= std::sqrt(avg);
    ops.push_back(e);
  }
  rep.residuals.assign(ne, std::vector<double>(ne, 0.0));
  for (int k = 0; k < ne; ++k) {
    for (int l = 0; l < ne; ++l) {
      Matrix ekl = ops[k].adjoint() * ops[l];
      Eigen::Matrix2cd m;
      m(0, 0) = code.logical_zero.dot(ekl * code.logical_zero);
      m(0, 1) = code.logical_zero.dot(ekl * code.logical_one);
      m(1, 0) = code.logical_one.dot(ekl * code.logical_zero);
      m(1, 1) = code.logical_one.dot(ekl * code.logical_one);
      const cplx c_kl = 0.5 * (m(0, 0) + m(1, 1));
      m(0, 0) -= c_kl;
      m(1, 1) -= c_kl;
      const double res = m.cwiseAbs().maxCoeff();
      rep.residuals[k][l] = res;
      rep.worst_residual = std::max(rep.worst_residual, res);
    }
  }
  rep.pass = rep.worst_residual < tolerance;
  return rep;
}

NoJumpMap no_jump_map(const CodeSpec& code, double kappa_c, double t_wait) {
  const double kt = kappa_c * t_wait;
  if (kt >= 0.5)
    throw std::invalid_argument("no_jump_map: kappa_c * t outside validity regime (< 0.5)");
  NoJumpMap map;
  Vector decay(code.dim);
  for (int n = 0; n < code.dim; ++n) decay(n) = std::exp(-0.5 * kt * n);
  Vector z = decay.asDiagonal() * code.logical_zero;
  Vector o = decay.asDiagonal() * code.logical_one;
  map.zero = z / z.norm();
  map.one = o / o.norm();
  map.theta = std::atan(std::exp(-2.0 * kt));
  return map;
}

std::string code_to_json(const CodeSpec& code) {
  nlohmann::json j;
  j["name"] = code.name;
  j["dim"] = code.dim;
  auto vec_to_json = [](const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
    return arr;
  };
  j["logical_zero"] = vec_to_json(code.logical_zero);
  j["logical_one"] = vec_to_json(code.logical_one);
  j["error_subspaces"] = nlohmann::json::array();
  for (auto& [e0, e1] : code.error_subspaces)
    j["error_subspaces"].push_back({vec_to_json(e0), vec_to_json(e1)});
  j["correctable_errors"] = code.correctable_errors;
  j["average_photon_number"] = code.average_photon_number;
  j["approximate"] = code.approximate;
  if (code.code_parity) j["code_parity"] = *code.code_parity;
  return j.dump(2);
}

CodeSpec code_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  CodeSpec c;
  c.name = j.at("name").get<std::string>();
  c.dim = j.at("dim").get<int>();
  auto vec_from_json = [&](const nlohmann::json& arr) {
    Vector v = Vector::Zero(c.dim);
    for (int i = 0; i < static_cast<int>(arr.size()); ++i)
      v(i) = cplx(arr[i][0].get<double>(), arr[i][1].get<double>());
    return v;
  };
  c.logical_zero = vec_from_json(j.at("logical_zero"));
  c.logical_one = vec_from_json(j.at("logical_one"));
  for (auto& pair : j.at("error_subspaces"))
    c.error_subspaces.push_back({vec_from_json(pair[0]), vec_from_json(pair[1])});
  if (j.contains("correctable_errors"))
    c.correctable_errors = j["correctable_errors"].get<std::vector<std::string>>();
  if (j.contains("average_photon_number"))
    c.average_photon_number = j["average_photon_number"].get<double>();
  if (j.contains("approximate")) c.approximate = j["approximate"].get<bool>();
  if (j.contains("code_parity")) c.code_parity = j["code_parity"].get<int>();
  c.check_invariants();
  return c;
}

CodeSpec code_by_name(const std::string& name) {
  if (name == "binomial") return binomial_lowest();
  if (name == "sqrt17") return sqrt17();
  if (name == "fock01") return fock_superposition(0, 1);
  if (name == "fock14") return fock_superposition(1, 4);
  if (name == "transmon") return transmon_code();
  std::string valid;
  for (const auto& n : known_code_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown encoding '" + name + "'; valid encodings: " + valid);
}

std::vector<std::string> known_code_names() {
  return {"binomial", "sqrt17", "fock01", "fock14", "transmon"};
}

}  // namespace aqec

#include "nsc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nsc {

void ExperimentConfig::validate() const {
  if (!(T > 0.0)) throw ConfigError("config: T must be > 0");
  if (!(s > 0.5) && !override_time_check)
    throw ConfigError("config: s must be > 1/2 (use the override flag)");
  if (!(T > 1.0) && !override_time_check)
    throw ConfigError("config: T must be > 1 (use the override flag)");
  if (K_para < 4 || K_hyp < 4) throw ConfigError("config: K must be >= 4");
  if (N < 8 || M < 8) throw ConfigError("config: grid too small");
  if (!(low_re_hi < 0.0)) throw ConfigError("config: low box must be Re < 0");
}

FourierVector ExperimentConfig::rho0() const {
  FourierVector v;
  v.coeffs = rho0_modes;
  v.sobolev_exponent = s;
  v.enforce_mean_zero();
  return v;
}

ExpSum ExperimentConfig::u0() const {
  if (!u0_modes.empty()) {
    ExpSum f;
    for (const auto& [m, c] : u0_modes)
      f.add_term(c, cplx(0.0, -2.0 * M_PI * m));
    return f;
  }
  if (u0_name == "zero") return ExpSum();
  // sin(pi x) = (e^{i pi x} - e^{-i pi x}) / 2i
  ExpSum f;
  f.add_term(cplx(0.0, -0.5), cplx(0.0, M_PI));
  f.add_term(cplx(0.0, 0.5), cplx(0.0, -M_PI));
  if (u0_name == "sinpi-mean0") f.add_term(cplx(-2.0 / M_PI, 0.0), cplx(0.0));
  else if (u0_name != "sinpi")
    throw ConfigError("config: unknown u0 name '" + u0_name + "'");
  return f;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["T"] = T;
  j["s"] = s;
  j["K_para"] = K_para;
  j["K_hyp"] = K_hyp;
  j["N"] = N;
  j["M"] = M;
  j["tolerances"] = {{"newton_tol", newton_tol},
                     {"svd_tol", svd_tol},
                     {"residual_tol", residual_tol}};
  j["scheme_order"] = scheme_order;
  j["residual_quad"] = residual_quad;
  auto& rm = j["rho0_modes"] = nlohmann::json::array();
  for (const auto& [m, c] : rho0_modes)
    rm.push_back({m, c.real(), c.imag()});
  j["u0"] = u0_name;
  if (!u0_modes.empty()) {
    auto& um = j["u0_modes"] = nlohmann::json::array();
    for (const auto& [m, c] : u0_modes)
      um.push_back({m, c.real(), c.imag()});
  }
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  j["override_time_check"] = override_time_check;
  j["low_box"] = {low_re_lo, low_re_hi, low_im_lo, low_im_hi};
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.T = j.value("T", c.T);
  c.s = j.value("s", c.s);
  c.K_para = j.value("K_para", c.K_para);
  c.K_hyp = j.value("K_hyp", c.K_hyp);
  c.N = j.value("N", c.N);
  c.M = j.value("M", c.M);
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    c.newton_tol = t.value("newton_tol", c.newton_tol);
    c.svd_tol = t.value("svd_tol", c.svd_tol);
    c.residual_tol = t.value("residual_tol", c.residual_tol);
  }
  c.scheme_order = j.value("scheme_order", c.scheme_order);
  c.residual_quad = j.value("residual_quad", c.residual_quad);
  if (j.contains("rho0_modes")) {
    c.rho0_modes.clear();
    for (const auto& row : j["rho0_modes"])
      c.rho0_modes[row[0].get<int>()] =
          cplx(row[1].get<double>(), row[2].get<double>());
  }
  c.u0_name = j.value("u0", c.u0_name);
  if (j.contains("u0_modes"))
    for (const auto& row : j["u0_modes"])
      c.u0_modes[row[0].get<int>()] =
          cplx(row[1].get<double>(), row[2].get<double>());
  c.out_dir = j.value("out_dir", c.out_dir);
  c.seed = j.value("seed", c.seed);
  c.override_time_check = j.value("override_time_check", false);
  if (j.contains("low_box")) {
    const auto& b = j["low_box"];
    c.low_re_lo = b[0].get<double>();
    c.low_re_hi = b[1].get<double>();
    c.low_im_lo = b[2].get<double>();
    c.low_im_hi = b[3].get<double>();
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string ExperimentConfig::hash() const {
  // canonical form: the experiment identity, not the artifact location
  ExperimentConfig canon = *this;
  canon.out_dir.clear();
  const std::string text = canon.to_json();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nsc

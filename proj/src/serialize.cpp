#include "yamabe/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace yamabe {

std::string decimal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const PolyCos& p) {
  Json out = Json::array();
  for (const auto& c : p.coefficients()) out.push_back(to_string(c));
  return out;
}

PolyCos polycos_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a JSON array");
  std::vector<Rational> c;
  c.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw std::invalid_argument("polynomial coefficients must be strings");
    c.push_back(parse_rational(e.get<std::string>()));
  }
  return PolyCos(std::move(c));
}

Json to_json(const SeriesSolution& sol) {
  Json out;
  out["n"] = sol.n;
  out["beta"] = to_string(sol.beta);
  out["gamma"] = to_string(sol.gamma);
  out["K"] = sol.order();
  Json coeffs = Json::array();
  for (const auto& uk : sol.coefficients) coeffs.push_back(to_json(uk));
  out["coefficients"] = std::move(coeffs);
  return out;
}

SeriesSolution solution_from_json(const Json& j) {
  try {
    SeriesSolution sol;
    sol.n = j.at("n").get<int>();
    if (sol.n < 3) throw std::invalid_argument("solution file has n < 3");
    sol.beta = parse_rational(j.at("beta").get<std::string>());
    sol.gamma = parse_rational(j.at("gamma").get<std::string>());
    const int k = j.at("K").get<int>();
    for (const auto& c : j.at("coefficients")) sol.coefficients.push_back(polycos_from_json(c));
    if (k != sol.order()) throw std::invalid_argument("solution file: K does not match the coefficient count");
    if (sol.coefficients.empty() || !(sol.coefficients[0] == PolyCos::linear(sol.beta, sol.gamma)))
      throw std::invalid_argument("solution file: u_0 does not match beta + gamma x");
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed solution JSON: ") + e.what());
  }
}

Json to_json(const EMVector& p) {
  Json out = Json::array();
  for (int i = 0; i <= p.n(); ++i) out.push_back(decimal(p[i]));
  return out;
}

EMVector em_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2) throw std::invalid_argument("EM vector must be an array of >= 2 entries");
  Eigen::VectorXd c(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    c[static_cast<Eigen::Index>(i)] = e.is_string() ? std::stod(e.get<std::string>()) : e.get<double>();
  }
  return EMVector(std::move(c));
}

Json to_json(const FluxReport& rep) {
  Json out;
  out["kid"] = rep.kid;
  out["radii"] = rep.radii;
  out["flux"] = rep.flux;
  out["quadrature_order"] = rep.quadrature_order;
  out["limit"] = rep.limit;
  out["coeff_inv_r"] = rep.coeff_inv_r;
  out["coeff_inv_r2"] = rep.coeff_inv_r2;
  out["fit_residual"] = rep.fit_residual;
  out["limit_drop_first"] = rep.limit_drop_first;
  out["stability_shift"] = rep.stability_shift;
  out["quadrature_converged"] = rep.quadrature_converged;
  out["stable"] = rep.stable;
  return out;
}

Json to_json(const BoundReport& rep) {
  Json out;
  out["lemma"] = rep.lemma;
  out["range"] = rep.range;
  out["worst_ratio"] = rep.worst_ratio;
  out["pass"] = rep.pass;
  Json diag = Json::object();
  for (const auto& [k, v] : rep.diagnostics) diag[k] = v;
  out["diagnostics"] = std::move(diag);
  if (!rep.sequence.empty()) out["sequence"] = rep.sequence;
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

Json to_json(const MassAspectFit& fit) {
  Json out;
  out["theta"] = fit.theta;
  out["mu"] = fit.mu;
  out["kappa"] = fit.kappa;
  out["residual"] = fit.residual;
  out["flagged"] = fit.flagged;
  return out;
}

Json to_json(const DecayFit& fit) {
  Json out;
  out["radii"] = fit.radii;
  out["residuals"] = fit.residuals;
  out["slope"] = fit.slope;
  out["intercept"] = fit.intercept;
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_columns(std::ostream& out, const std::string& header, const std::vector<std::vector<double>>& columns) {
  out << "# " << header << "\n";
  if (columns.empty()) return;
  const std::size_t rows = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw std::invalid_argument("columns differ in length");
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? " " : "") << decimal(columns[c][i]);
    out << "\n";
  }
}

}  // namespace yamabe

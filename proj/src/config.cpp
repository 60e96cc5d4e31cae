#include "sgbc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "sgbc/expression.hpp"

namespace sgbc {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

FieldSpec field_from_json(const json& j, const std::string& where) {
  FieldSpec f;
  if (j.is_string()) {
    f.mean = j.get<std::string>();
    return f;
  }
  reject_unknown(j, {"mean", "kl"}, where);
  read(j, "mean", f.mean);
  if (j.contains("kl") && !j.at("kl").is_null()) {
    const json& kl = j.at("kl");
    reject_unknown(kl, {"correlation_length", "std_dev"}, where + ".kl");
    f.random = true;
    read(kl, "correlation_length", f.correlation_length);
    read(kl, "std_dev", f.std_dev);
  }
  return f;
}

json field_to_json(const FieldSpec& f) {
  json j{{"mean", f.mean}};
  if (f.random)
    j["kl"] = {{"correlation_length", f.correlation_length}, {"std_dev", f.std_dev}};
  else
    j["kl"] = nullptr;
  return j;
}

double bound_value(const json& j, double fallback) {
  if (j.is_null()) return fallback;
  if (!j.is_number()) throw ConfigError("bounds must be numbers or null");
  return j.get<double>();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (domain != "interval" && domain != "unit_square")
    throw ConfigError("domain must be 'interval' or 'unit_square'");
  if (levels.empty()) throw ConfigError("levels must not be empty");
  if (degrees.empty()) throw ConfigError("degrees must not be empty");
  const int lo = domain == "interval" ? 1 : 0;
  for (int l : levels)
    if (l < lo || l > 14) throw ConfigError("mesh level out of range: " + std::to_string(l));
  for (int q : degrees)
    if (q < 0 || q > 12) throw ConfigError("polynomial degree out of range: " + std::to_string(q));
  if (noise_dimension < 1) throw ConfigError("noise_dimension must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (reference.level < *std::max_element(levels.begin(), levels.end()))
    throw ConfigError("reference level must be at least the finest run level");
  if (reference.degree < *std::max_element(degrees.begin(), degrees.end()))
    throw ConfigError("reference degree must be at least the largest run degree");
  for (const FieldSpec* f : {&diffusion, &source}) {
    Expression check(f->mean);
    if (f->random && (!(f->correlation_length > 0.0) || !(f->std_dev >= 0.0)))
      throw ConfigError("KL fields need correlation_length > 0 and std_dev >= 0");
  }
  Expression check(desired_state);
  if (boundary_noise != "none" && boundary_noise != "brownian_bridge")
    throw ConfigError("boundary_noise must be 'none' or 'brownian_bridge'");
  if (bounds) bounds->validate();
  parse_variant(solver.preconditioner, 0);
  if (!(solver.tol > 0.0) || !(solver.bicgstab_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (solver.maxit < 1 || solver.bicgstab_maxit < 1 || solver.max_outer < 1)
    throw ConfigError("iteration limits must be positive");
  if (eigenvalue_scaling != "covariance" && eigenvalue_scaling != "unit")
    throw ConfigError("eigenvalue_scaling must be 'covariance' or 'unit'");
  if (positivity != "enforce" && positivity != "warn") throw ConfigError("positivity must be 'enforce' or 'warn'");
  if (positivity_resolution < 2) throw ConfigError("positivity_resolution must be at least 2");
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"name", "domain", "levels", "degrees", "noise_dimension", "diffusion", "source", "desired_state",
                  "boundary_noise", "alpha", "bounds", "solver", "reference", "eigenvalue_scaling", "positivity",
                  "positivity_resolution", "export_cap"},
                 "config");
  ExperimentConfig c;
  read(j, "name", c.name);
  read(j, "domain", c.domain);
  read(j, "levels", c.levels);
  read(j, "degrees", c.degrees);
  read(j, "noise_dimension", c.noise_dimension);
  if (j.contains("diffusion")) c.diffusion = field_from_json(j.at("diffusion"), "diffusion");
  if (j.contains("source")) c.source = field_from_json(j.at("source"), "source");
  read(j, "desired_state", c.desired_state);
  read(j, "boundary_noise", c.boundary_noise);
  read(j, "alpha", c.alpha);
  if (j.contains("bounds") && !j.at("bounds").is_null()) {
    const json& b = j.at("bounds");
    reject_unknown(b, {"lower", "upper"}, "bounds");
    BoxBounds box;
    if (b.contains("lower")) box.lower = bound_value(b.at("lower"), box.lower);
    if (b.contains("upper")) box.upper = bound_value(b.at("upper"), box.upper);
    c.bounds = box;
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, {"preconditioner", "tol", "maxit", "bicgstab_tol", "bicgstab_maxit", "sigma", "max_outer"},
                   "solver");
    read(s, "preconditioner", c.solver.preconditioner);
    read(s, "tol", c.solver.tol);
    read(s, "maxit", c.solver.maxit);
    read(s, "bicgstab_tol", c.solver.bicgstab_tol);
    read(s, "bicgstab_maxit", c.solver.bicgstab_maxit);
    read(s, "sigma", c.solver.sigma);
    read(s, "max_outer", c.solver.max_outer);
  }
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    reject_unknown(r, {"level", "degree"}, "reference");
    read(r, "level", c.reference.level);
    read(r, "degree", c.reference.degree);
  }
  read(j, "eigenvalue_scaling", c.eigenvalue_scaling);
  read(j, "positivity", c.positivity);
  read(j, "positivity_resolution", c.positivity_resolution);
  read(j, "export_cap", c.export_cap);
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["domain"] = c.domain;
  j["levels"] = c.levels;
  j["degrees"] = c.degrees;
  j["noise_dimension"] = c.noise_dimension;
  j["diffusion"] = field_to_json(c.diffusion);
  j["source"] = field_to_json(c.source);
  j["desired_state"] = c.desired_state;
  j["boundary_noise"] = c.boundary_noise;
  j["alpha"] = c.alpha;
  if (c.bounds) {
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    j["bounds"] = {{"lower", finite_or_null(c.bounds->lower)}, {"upper", finite_or_null(c.bounds->upper)}};
  } else {
    j["bounds"] = nullptr;
  }
  j["solver"] = {{"preconditioner", c.solver.preconditioner}, {"tol", c.solver.tol},
                 {"maxit", c.solver.maxit},                   {"bicgstab_tol", c.solver.bicgstab_tol},
                 {"bicgstab_maxit", c.solver.bicgstab_maxit}, {"sigma", c.solver.sigma},
                 {"max_outer", c.solver.max_outer}};
  j["reference"] = {{"level", c.reference.level}, {"degree", c.reference.degree}};
  j["eigenvalue_scaling"] = c.eigenvalue_scaling;
  j["positivity"] = c.positivity;
  j["positivity_resolution"] = c.positivity_resolution;
  j["export_cap"] = c.export_cap;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace sgbc

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgbc/pdas.hpp"

// Experiment configuration. A single JSON document; see README for the
// schema. Unknown keys are rejected so typos do not silently fall back to
// defaults.

namespace sgbc {

/// Mean expression plus an optional exponential-covariance KL expansion.
struct FieldSpec {
  std::string mean = "0";
  bool random = false;
  double correlation_length = 1.0;
  double std_dev = 0.0;
};

struct SolverSpec {
  std::string preconditioner = "auto";  // mean | ullmann | auto
  double tol = 1e-10;                   // MINRES
  int maxit = 1000;
  double bicgstab_tol = 1e-8;           // PDAS inner solves
  int bicgstab_maxit = 1000;
  double sigma = 0.0;                   // <= 0 selects sigma = alpha
  int max_outer = 50;
};

struct ReferenceSpec {
  int level = 0;
  int degree = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string domain = "interval";  // interval | unit_square
  std::vector<int> levels;          // h = 2^-level
  std::vector<int> degrees;         // Q values
  int noise_dimension = 1;          // N
  FieldSpec diffusion{"1"};
  FieldSpec source{"0"};
  std::string desired_state = "0";
  std::string boundary_noise = "none";  // none | brownian_bridge
  double alpha = 1.0;
  std::optional<BoxBounds> bounds;
  SolverSpec solver;
  ReferenceSpec reference;
  /// covariance: lambda_k are eigenvalues of the covariance operator (with
  /// kappa^2), unit: eigenvalues of the unit-variance correlation kernel.
  std::string eigenvalue_scaling = "covariance";
  std::string positivity = "enforce";  // enforce | warn
  int positivity_resolution = 64;
  long export_cap = 20000;             // largest saddle size for dense export

  int spatial_dimension() const { return domain == "interval" ? 1 : 2; }
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

}  // namespace sgbc

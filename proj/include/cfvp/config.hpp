#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "cfvp/epidemic.hpp"
#include "cfvp/graph.hpp"

namespace cfvp {

// lo, lo+step, ..., hi (inclusive up to rounding), each value rounded to 1e-9.
std::vector<double> uniform_grid(double lo, double hi, double step);

// Experiment configuration. JSON keys are the field names; k_a and k_b accept
// a single integer or a list, and sweeps run over every (k_a, k_b) pair.
struct SweepConfig {
  NodeId n = 2000;
  std::vector<int> k_a{8};
  std::vector<int> k_b{8};
  std::vector<double> lambda_grid = uniform_grid(0.0, 1.0, 0.02);
  std::vector<double> q_grid = uniform_grid(0.0, 1.0, 0.1);
  double lambda = 0.5;  // fixed transmissibility of q sweeps and time series
  double q = 0.0;       // fixed identification probability of lambda sweeps
  double sigma = 0.3;
  IsolationKind strategy = IsolationKind::None;
  int realizations = 100;
  std::uint64_t master_seed = 1;
  double collapse_epsilon = 0.005;

  // Throws ConfigError naming the first offending field.
  void validate() const;
  IsolationStrategy isolation(double q_value) const { return {strategy, q_value, sigma}; }
};

// Unknown keys and wrong types raise ConfigError. The result is validated.
SweepConfig config_from_json(const nlohmann::json& doc, SweepConfig base = {});
nlohmann::json config_to_json(const SweepConfig& config);

}  // namespace cfvp

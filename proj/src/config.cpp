#include "cfvp/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cfvp/errors.hpp"

namespace cfvp {

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ConfigError("grid_step", "must be positive");
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return grid;
}

namespace {

bool probability(double x) { return x >= 0.0 && x <= 1.0; }

void check_grid(const std::vector<double>& grid, const char* field) {
  if (grid.empty()) throw ConfigError(field, "must not be empty");
  if (!std::all_of(grid.begin(), grid.end(), probability)) {
    throw ConfigError(field, "values must lie in [0, 1]");
  }
  if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError(field, "must be sorted ascending");
}

void check_degrees(const std::vector<int>& ks, NodeId n, const char* field) {
  if (ks.empty()) throw ConfigError(field, "must not be empty");
  for (const int k : ks) {
    if (k <= 0 || k % 2 != 0) {
      throw ConfigError(field, "average degree must be a positive even integer, got " +
                                   std::to_string(k));
    }
    if (k / 2 >= n) throw ConfigError(field, "average degree too large for n");
  }
}

template <typename T>
T read(const nlohmann::json& value, const std::string& field) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field, "wrong type: " + value.dump());
  }
}

std::vector<int> read_degrees(const nlohmann::json& value, const std::string& field) {
  if (value.is_array()) return read<std::vector<int>>(value, field);
  if (!value.is_number_integer()) throw ConfigError(field, "expected an integer or a list");
  return {value.get<int>()};
}

}  // namespace

void SweepConfig::validate() const {
  if (n < 2) throw ConfigError("n", "must be at least 2");
  check_degrees(k_a, n, "k_a");
  check_degrees(k_b, n, "k_b");
  check_grid(lambda_grid, "lambda_grid");
  check_grid(q_grid, "q_grid");
  if (!probability(lambda)) throw ConfigError("lambda", "must lie in [0, 1]");
  if (!probability(q)) throw ConfigError("q", "must lie in [0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma", "must be >= 0");
  if (realizations < 1) throw ConfigError("realizations", "must be at least 1");
  if (!(collapse_epsilon > 0.0 && collapse_epsilon <= 1.0)) {
    throw ConfigError("collapse_epsilon", "must lie in (0, 1]");
  }
}

SweepConfig config_from_json(const nlohmann::json& doc, SweepConfig base) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  SweepConfig c = std::move(base);
  for (const auto& [key, value] : doc.items()) {
    if (key == "n") {
      c.n = read<NodeId>(value, key);
    } else if (key == "k_a") {
      c.k_a = read_degrees(value, key);
    } else if (key == "k_b") {
      c.k_b = read_degrees(value, key);
    } else if (key == "lambda_grid") {
      c.lambda_grid = read<std::vector<double>>(value, key);
    } else if (key == "q_grid") {
      c.q_grid = read<std::vector<double>>(value, key);
    } else if (key == "lambda") {
      c.lambda = read<double>(value, key);
    } else if (key == "q") {
      c.q = read<double>(value, key);
    } else if (key == "sigma") {
      c.sigma = read<double>(value, key);
    } else if (key == "strategy") {
      c.strategy = parse_isolation_kind(read<std::string>(value, key));
    } else if (key == "realizations") {
      c.realizations = read<int>(value, key);
    } else if (key == "master_seed") {
      c.master_seed = read<std::uint64_t>(value, key);
    } else if (key == "collapse_epsilon") {
      c.collapse_epsilon = read<double>(value, key);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const SweepConfig& c) {
  return nlohmann::json{
      {"n", c.n},
      {"k_a", c.k_a},
      {"k_b", c.k_b},
      {"lambda_grid", c.lambda_grid},
      {"q_grid", c.q_grid},
      {"lambda", c.lambda},
      {"q", c.q},
      {"sigma", c.sigma},
      {"strategy", std::string(to_string(c.strategy))},
      {"realizations", c.realizations},
      {"master_seed", c.master_seed},
      {"collapse_epsilon", c.collapse_epsilon},
  };
}

}  // namespace cfvp

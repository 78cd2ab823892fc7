#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfvp/config.hpp"
#include "cfvp/engine.hpp"

namespace cfvp {

// Aggregate over `realizations` runs at one grid point. std_g uses the
// unbiased (n-1) estimator and is 0 for a single realization.
struct SweepPoint {
  int k_a = 0;
  int k_b = 0;
  IsolationKind strategy = IsolationKind::None;
  double q = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;
  double mean_g = 0.0;
  double std_g = 0.0;
  double mean_total_infected = 0.0;
  int realizations = 0;

  double standard_error() const;
};

// Builds a fresh system for (k_a, k_b) from the realization seed's topology
// stream and runs CF-VP on it.
RunResult run_realization(NodeId n, int k_a, int k_b, double lambda,
                          const IsolationStrategy& strategy, std::uint64_t seed);

// `threads` = 0 uses every available core. Results do not depend on it.
// Realization r at sweep value x runs with realization_seed(master_seed, x, r).
std::vector<SweepPoint> sweep_lambda(const SweepConfig& config, unsigned threads = 0);
// Requires strategy != none. Transmissibility is config.lambda.
std::vector<SweepPoint> sweep_q(const SweepConfig& config, unsigned threads = 0);

// Smallest grid lambda from which every point has mean_g < epsilon. `points`
// is one (k_a, k_b) series sorted by lambda; unsorted input throws
// std::logic_error.
std::optional<double> estimate_lambda_c(std::span<const SweepPoint> points, double epsilon);

struct LambdaCRow {
  int k_a = 0;
  int k_b = 0;
  std::optional<double> lambda_c;
  double epsilon = 0.0;
  double grid_step = 0.0;
};
// One row per (k_a, k_b) series of a lambda sweep.
std::vector<LambdaCRow> lambda_c_table(std::span<const SweepPoint> points,
                                       const SweepConfig& config);

// Stage-aligned means over realizations. Current-I series are padded with 0
// past the end of a run, cumulative series with the run's final value.
struct TimeSeries {
  std::string mode;  // "cfvp" or "single"
  int k = 0;
  double lambda = 0.0;
  std::vector<double> mean_f_i_current;
  std::vector<double> mean_f_i_cumulative;
  std::vector<double> final_cumulative;  // per realization, in realization order
};

// For each k in config.k_a, runs CF-VP with <k_A> = <k_B> = k and the
// single-layer baseline on a copy of the same layer A with the same epidemic
// seed. Returns (cfvp, single) pairs in k order.
std::vector<TimeSeries> timeseries_experiment(const SweepConfig& config, unsigned threads = 0);

// Least-squares monotone fit (pool-adjacent-violators).
std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights,
                                 bool increasing);

// CSV writers. Each file opens with '#' comment lines carrying the effective
// configuration and master seed, then a header row.
void write_sweep_lambda_csv(std::ostream& out, std::span<const SweepPoint> points,
                            const SweepConfig& config);
void write_sweep_q_csv(std::ostream& out, std::span<const SweepPoint> points,
                       const SweepConfig& config);
void write_timeseries_csv(std::ostream& out, std::span<const TimeSeries> series,
                          const SweepConfig& config);
void write_lambda_c_csv(std::ostream& out, std::span<const LambdaCRow> rows,
                        const SweepConfig& config);
void write_config_comment(std::ostream& out, const SweepConfig& config);

}  // namespace cfvp

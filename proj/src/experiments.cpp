#include "cfvp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "cfvp/errors.hpp"

namespace cfvp {

namespace {

// Runs body(0..count-1) on up to `threads` workers. Each index writes only its
// own output slot, so the result is independent of scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

struct Sample {
  double g = 0.0;
  double total_infected = 0.0;
};

struct Task {
  int k_a;
  int k_b;
  double lambda;
  double q;
  double seed_param;
};

std::vector<SweepPoint> run_tasks(const SweepConfig& config, const std::vector<Task>& tasks,
                                  unsigned threads) {
  const auto reps = static_cast<std::size_t>(config.realizations);
  std::vector<Sample> samples(tasks.size() * reps);
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const Task& task = tasks[i / reps];
    const auto r = i % reps;
    const auto seed = realization_seed(config.master_seed, task.seed_param, r);
    const auto run = run_realization(config.n, task.k_a, task.k_b, task.lambda,
                                     config.isolation(task.q), seed);
    samples[i] = {run.g_final, static_cast<double>(run.total_infected)};
  });

  std::vector<SweepPoint> points;
  points.reserve(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto first = samples.begin() + static_cast<std::ptrdiff_t>(t * reps);
    const std::span<const Sample> chunk(first, first + static_cast<std::ptrdiff_t>(reps));

    double sum_g = 0.0;
    double sum_inf = 0.0;
    for (const auto& s : chunk) {
      sum_g += s.g;
      sum_inf += s.total_infected;
    }
    const double mean_g = sum_g / static_cast<double>(reps);
    double ss = 0.0;
    for (const auto& s : chunk) ss += (s.g - mean_g) * (s.g - mean_g);

    SweepPoint p;
    p.k_a = tasks[t].k_a;
    p.k_b = tasks[t].k_b;
    p.strategy = config.strategy;
    p.q = tasks[t].q;
    p.sigma = config.sigma;
    p.lambda = tasks[t].lambda;
    p.mean_g = mean_g;
    p.std_g = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
    p.mean_total_infected = sum_inf / static_cast<double>(reps);
    p.realizations = config.realizations;
    points.push_back(p);
  }
  return points;
}

std::string format_optional(const std::optional<double>& value) {
  return value ? fmt::format("{}", *value) : std::string("NA");
}

}  // namespace

double SweepPoint::standard_error() const {
  return realizations > 0 ? std_g / std::sqrt(static_cast<double>(realizations)) : 0.0;
}

RunResult run_realization(NodeId n, int k_a, int k_b, double lambda,
                          const IsolationStrategy& strategy, std::uint64_t seed) {
  Rng topology = make_stream(seed, Stream::kTopology);
  auto system = build_system(DegreeSpec::from_average_degree(n, k_a),
                             DegreeSpec::from_average_degree(n, k_b), topology);
  return run_cfvp(system, lambda, strategy, seed);
}

std::vector<SweepPoint> sweep_lambda(const SweepConfig& config, unsigned threads) {
  config.validate();
  std::vector<Task> tasks;
  for (const int ka : config.k_a) {
    for (const int kb : config.k_b) {
      for (const double lambda : config.lambda_grid) {
        tasks.push_back({ka, kb, lambda, config.q, lambda});
      }
    }
  }
  return run_tasks(config, tasks, threads);
}

std::vector<SweepPoint> sweep_q(const SweepConfig& config, unsigned threads) {
  config.validate();
  if (config.strategy == IsolationKind::None) {
    throw ConfigError("strategy", "a q sweep needs deterministic or degree isolation");
  }
  std::vector<Task> tasks;
  for (const int ka : config.k_a) {
    for (const int kb : config.k_b) {
      for (const double q : config.q_grid) tasks.push_back({ka, kb, config.lambda, q, q});
    }
  }
  return run_tasks(config, tasks, threads);
}

std::optional<double> estimate_lambda_c(std::span<const SweepPoint> points, double epsilon) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].lambda < points[i - 1].lambda) {
      throw std::logic_error("estimate_lambda_c: points are not sorted by lambda");
    }
  }
  std::optional<double> threshold;
  for (std::size_t i = points.size(); i-- > 0;) {
    if (!(points[i].mean_g < epsilon)) break;
    threshold = points[i].lambda;
  }
  return threshold;
}

std::vector<LambdaCRow> lambda_c_table(std::span<const SweepPoint> points,
                                       const SweepConfig& config) {
  double step = 0.0;
  for (std::size_t i = 1; i < config.lambda_grid.size(); ++i) {
    const double d = config.lambda_grid[i] - config.lambda_grid[i - 1];
    if (d > 0.0 && (step == 0.0 || d < step)) step = d;
  }
  step = std::round(step * 1e9) / 1e9;

  std::vector<LambdaCRow> rows;
  std::size_t begin = 0;
  while (begin < points.size()) {
    std::size_t end = begin;
    while (end < points.size() && points[end].k_a == points[begin].k_a &&
           points[end].k_b == points[begin].k_b) {
      ++end;
    }
    rows.push_back({points[begin].k_a, points[begin].k_b,
                    estimate_lambda_c(points.subspan(begin, end - begin), config.collapse_epsilon),
                    config.collapse_epsilon, step});
    begin = end;
  }
  return rows;
}

std::vector<TimeSeries> timeseries_experiment(const SweepConfig& config, unsigned threads) {
  config.validate();
  const auto reps = static_cast<std::size_t>(config.realizations);
  const auto ks = config.k_a;

  struct Pair {
    RunResult coupled;
    RunResult single;
  };
  std::vector<Pair> runs(ks.size() * reps);
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    const int k = ks[i / reps];
    const auto seed = realization_seed(config.master_seed, config.lambda, i % reps);
    Rng topology = make_stream(seed, Stream::kTopology);
    const auto spec = DegreeSpec::from_average_degree(config.n, k);
    auto system = build_system(spec, spec, topology);
    const Graph baseline = system.layer_a();
    runs[i].coupled = run_cfvp(system, config.lambda, {}, seed);
    runs[i].single = run_single_layer_sir(baseline, config.lambda, seed);
  });

  auto aggregate = [&](std::size_t k_index, bool coupled) {
    TimeSeries ts;
    ts.mode = coupled ? "cfvp" : "single";
    ts.k = ks[k_index];
    ts.lambda = config.lambda;
    std::size_t length = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& run = coupled ? runs[k_index * reps + r].coupled : runs[k_index * reps + r].single;
      length = std::max(length, run.stages.size());
    }
    ts.mean_f_i_current.assign(length, 0.0);
    ts.mean_f_i_cumulative.assign(length, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& run = coupled ? runs[k_index * reps + r].coupled : runs[k_index * reps + r].single;
      const double last = run.stages.back().f_i_cumulative;
      for (std::size_t s = 0; s < length; ++s) {
        if (s < run.stages.size()) {
          ts.mean_f_i_current[s] += run.stages[s].f_i_current;
          ts.mean_f_i_cumulative[s] += run.stages[s].f_i_cumulative;
        } else {
          ts.mean_f_i_cumulative[s] += last;
        }
      }
      ts.final_cumulative.push_back(last);
    }
    for (auto& v : ts.mean_f_i_current) v /= static_cast<double>(reps);
    for (auto& v : ts.mean_f_i_cumulative) v /= static_cast<double>(reps);
    return ts;
  };

  std::vector<TimeSeries> out;
  for (std::size_t k = 0; k < ks.size(); ++k) {
    out.push_back(aggregate(k, true));
    out.push_back(aggregate(k, false));
  }
  return out;
}

std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights,
                                 bool increasing) {
  if (values.size() != weights.size()) throw std::invalid_argument("isotonic_fit: size mismatch");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  const double sign = increasing ? 1.0 : -1.0;
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({sign * values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.mean = w > 0.0 ? (prev.mean * prev.weight + top.mean * top.weight) / w
                          : (prev.mean + top.mean) / 2.0;
      prev.weight = w;
      prev.count += top.count;
    }
  }
  std::vector<double> fit;
  fit.reserve(values.size());
  for (const auto& b : blocks) fit.insert(fit.end(), b.count, sign * b.mean);
  return fit;
}

void write_config_comment(std::ostream& out, const SweepConfig& config) {
  out << "# config: " << config_to_json(config).dump() << '\n';
  out << "# master_seed: " << config.master_seed << '\n';
}

void write_sweep_lambda_csv(std::ostream& out, std::span<const SweepPoint> points,
                            const SweepConfig& config) {
  write_config_comment(out, config);
  out << "k_a,k_b,strategy,q,lambda,mean_g,std_g,mean_total_infected,realizations\n";
  for (const auto& p : points) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", p.k_a, p.k_b, to_string(p.strategy), p.q,
                       p.lambda, p.mean_g, p.std_g, p.mean_total_infected, p.realizations);
  }
}

void write_sweep_q_csv(std::ostream& out, std::span<const SweepPoint> points,
                       const SweepConfig& config) {
  write_config_comment(out, config);
  out << "k_a,k_b,strategy,sigma,lambda,q,mean_g,std_g,realizations\n";
  for (const auto& p : points) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", p.k_a, p.k_b, to_string(p.strategy),
                       p.sigma, p.lambda, p.q, p.mean_g, p.std_g, p.realizations);
  }
}

void write_timeseries_csv(std::ostream& out, std::span<const TimeSeries> series,
                          const SweepConfig& config) {
  write_config_comment(out, config);
  out << "mode,k,lambda,stage,mean_f_i_current,mean_f_i_cumulative\n";
  for (const auto& ts : series) {
    for (std::size_t s = 0; s < ts.mean_f_i_current.size(); ++s) {
      out << fmt::format("{},{},{},{},{},{}\n", ts.mode, ts.k, ts.lambda, s + 1,
                         ts.mean_f_i_current[s], ts.mean_f_i_cumulative[s]);
    }
  }
}

void write_lambda_c_csv(std::ostream& out, std::span<const LambdaCRow> rows,
                        const SweepConfig& config) {
  write_config_comment(out, config);
  out << "k_a,k_b,lambda_c,epsilon,grid_step\n";
  for (const auto& row : rows) {
    out << fmt::format("{},{},{},{},{}\n", row.k_a, row.k_b, format_optional(row.lambda_c),
                       row.epsilon, row.grid_step);
  }
}

}  // namespace cfvp

// cfvp: command-line driver for the CF-VP simulator.
//
//   cfvp generate      two BA layers as edge lists
//   cfvp run           one traced realization
//   cfvp sweep-lambda  G vs lambda, plus lambda_c per (k_a, k_b)
//   cfvp sweep-q       G vs q under adaptive isolation
//   cfvp timeseries    f_I per stage, CF-VP vs single layer
//   cfvp threshold     lambda_c only
//
// Exit status: 0 ok, 1 configuration or usage error, 2 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cfvp/config.hpp"
#include "cfvp/errors.hpp"
#include "cfvp/experiments.hpp"

namespace fs = std::filesystem;
using namespace cfvp;

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<NodeId> n;
  std::optional<int> ka;
  std::optional<int> kb;
  std::optional<double> lambda;
  std::optional<double> q;
  std::optional<double> sigma;
  std::optional<std::string> strategy;
  std::optional<int> realizations;
  unsigned threads = 0;
};

SweepConfig resolve_config(const Overrides& o) {
  SweepConfig base;
  if (const char* env = std::getenv("CFVP_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      base.master_seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError("CFVP_SEED", "not an unsigned integer");
    }
  }

  SweepConfig c = base;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot read config file " + o.config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    c = config_from_json(doc, base);
  }

  if (o.seed) c.master_seed = *o.seed;
  if (o.n) c.n = *o.n;
  if (o.ka) c.k_a = {*o.ka};
  if (o.kb) c.k_b = {*o.kb};
  if (o.lambda) c.lambda = *o.lambda;
  if (o.q) c.q = *o.q;
  if (o.sigma) c.sigma = *o.sigma;
  if (o.strategy) c.strategy = parse_isolation_kind(*o.strategy);
  if (o.realizations) c.realizations = *o.realizations;
  c.validate();
  return c;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  const auto path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::string& name) {
  out.flush();
  if (!out) throw IoError("write failed for " + name);
}

void cmd_generate(const SweepConfig& c, const Overrides& o) {
  Rng topology = make_stream(c.master_seed, Stream::kTopology);
  const auto system = build_system(DegreeSpec::from_average_degree(c.n, c.k_a.front()),
                                   DegreeSpec::from_average_degree(c.n, c.k_b.front()), topology);
  for (const auto& [name, layer] :
       {std::pair{"layer_a.edges", &system.layer_a()}, {"layer_b.edges", &system.layer_b()}}) {
    auto out = open_output(o.out_dir, name);
    write_config_comment(out, c);
    write_edge_list(out, *layer);
    finish(out, name);
    std::cout << fmt::format("{}: {} nodes, {} edges\n", name, layer->size(), layer->edge_count());
  }
}

void cmd_run(const SweepConfig& c, const Overrides& o) {
  Rng topology = make_stream(c.master_seed, Stream::kTopology);
  auto system = build_system(DegreeSpec::from_average_degree(c.n, c.k_a.front()),
                             DegreeSpec::from_average_degree(c.n, c.k_b.front()), topology);
  const auto result = run_cfvp(system, c.lambda, c.isolation(c.q), c.master_seed);

  std::cout << fmt::format("{:>5} {:>8} {:>8} {:>9} {:>9} {:>7} {:>10} {:>10} {:>10}\n", "stage",
                           "new_I", "virus_R", "casc_A", "casc_B", "pruned", "f_I", "f_I_cum",
                           "G");
  for (const auto& s : result.stages) {
    std::cout << fmt::format("{:>5} {:>8} {:>8} {:>9} {:>9} {:>7} {:>10.6f} {:>10.6f} {:>10.6f}\n",
                             s.stage, s.newly_infected, s.virus_removed, s.cascade_removed_a,
                             s.cascade_removed_b, s.edges_pruned, s.f_i_current, s.f_i_cumulative,
                             s.functional_fraction);
  }
  std::cout << fmt::format("total_infected {}\n", result.total_infected);
  std::cout << fmt::format("g_final {}\n", result.g_final);

  auto out = open_output(o.out_dir, "trace.csv");
  write_config_comment(out, c);
  write_trace_csv(out, result);
  finish(out, "trace.csv");
}

void cmd_sweep_lambda(const SweepConfig& c, const Overrides& o, bool write_points) {
  const auto points = sweep_lambda(c, o.threads);
  const auto rows = lambda_c_table(points, c);
  if (write_points) {
    auto out = open_output(o.out_dir, "sweep_lambda.csv");
    write_sweep_lambda_csv(out, points, c);
    finish(out, "sweep_lambda.csv");
  }
  auto out = open_output(o.out_dir, "lambda_c.csv");
  write_lambda_c_csv(out, rows, c);
  finish(out, "lambda_c.csv");
  for (const auto& row : rows) {
    std::cout << fmt::format("k_a={} k_b={} lambda_c={}\n", row.k_a, row.k_b,
                             row.lambda_c ? fmt::format("{}", *row.lambda_c) : "not reached");
  }
}

void cmd_sweep_q(const SweepConfig& c, const Overrides& o) {
  const auto points = sweep_q(c, o.threads);
  auto out = open_output(o.out_dir, "sweep_q.csv");
  write_sweep_q_csv(out, points, c);
  finish(out, "sweep_q.csv");
  std::cout << fmt::format("{} points written to sweep_q.csv\n", points.size());
}

void cmd_timeseries(const SweepConfig& c, const Overrides& o) {
  const auto series = timeseries_experiment(c, o.threads);
  auto out = open_output(o.out_dir, "timeseries.csv");
  write_timeseries_csv(out, series, c);
  finish(out, "timeseries.csv");
  for (const auto& s : series) {
    std::cout << fmt::format("{:<6} k={:<3} final cumulative f_I={:.4f}\n", s.mode, s.k,
                             s.mean_f_i_cumulative.back());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CF-VP: virus propagation and cascading failures on interdependent networks"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "JSON config file");
  app.add_option("--out", o.out_dir, "output directory");
  app.add_option("--seed", o.seed, "master seed (falls back to CFVP_SEED)");
  app.add_option("--n", o.n, "nodes per layer");
  app.add_option("--ka", o.ka, "average degree of layer A");
  app.add_option("--kb", o.kb, "average degree of layer B");
  app.add_option("--lambda", o.lambda, "transmissibility");
  app.add_option("--q", o.q, "mean identification probability");
  app.add_option("--sigma", o.sigma, "std-dev of degree-based q");
  app.add_option("--strategy", o.strategy, "none | deterministic | degree");
  app.add_option("--realizations", o.realizations, "runs per grid point");
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)");

  auto* generate = app.add_subcommand("generate", "write two BA layers as edge lists");
  auto* run = app.add_subcommand("run", "run and trace one realization");
  auto* sweep_l = app.add_subcommand("sweep-lambda", "G vs lambda and lambda_c");
  auto* sweep_qc = app.add_subcommand("sweep-q", "G vs q under isolation");
  auto* series = app.add_subcommand("timeseries", "f_I per stage, CF-VP vs single layer");
  auto* threshold = app.add_subcommand("threshold", "lambda_c per (k_a, k_b)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const auto config = resolve_config(o);
    if (generate->parsed()) cmd_generate(config, o);
    if (run->parsed()) cmd_run(config, o);
    if (sweep_l->parsed()) cmd_sweep_lambda(config, o, true);
    if (sweep_qc->parsed()) cmd_sweep_q(config, o);
    if (series->parsed()) cmd_timeseries(config, o);
    if (threshold->parsed()) cmd_sweep_lambda(config, o, false);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

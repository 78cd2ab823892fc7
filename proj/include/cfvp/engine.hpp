#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "cfvp/coupled_system.hpp"
#include "cfvp/epidemic.hpp"
#include "cfvp/graph.hpp"

namespace cfvp {

struct StageRecord {
  int stage = 0;  // 1-based
  std::size_t newly_infected = 0;
  std::size_t virus_removed = 0;
  std::size_t cascade_removed_a = 0;  // A-nodes lost to the cascade, virus-removed ones excluded
  std::size_t cascade_removed_b = 0;
  std::size_t edges_pruned = 0;
  double f_i_current = 0.0;     // newly infected / N, measured right after spreading
  double f_i_cumulative = 0.0;  // ever infected / N
  double functional_fraction = 0.0;
};

struct RunResult {
  double g_final = 1.0;
  std::vector<StageRecord> stages;
  std::size_t total_infected = 0;
  std::uint64_t seed = 0;
  bool collapsed = false;
};

// One CF-VP realization on a fresh system. `seed` feeds the epidemic and the
// identification-probability streams (see make_stream). Each stage runs
// isolation (if active), spreading, then a cascade seeded by the nodes the
// virus just removed; cascade-killed A-nodes become Failed. Stops once no
// infected node is left. Throws ConfigError for lambda outside [0,1].
RunResult run_cfvp(CoupledSystem& system, double lambda, const IsolationStrategy& strategy,
                   std::uint64_t seed);

// SIR on a single graph with the same spreading step and no cascade or
// isolation. functional_fraction tracks the not-yet-removed fraction, so
// g_final is the susceptible fraction left at the end. `seed_node` pins the
// initially infected node instead of drawing it.
RunResult run_single_layer_sir(const Graph& graph, double lambda, std::uint64_t seed,
                               std::optional<NodeId> seed_node = std::nullopt);

// Deterministic replay input. Outcomes are keyed by directed (infected,
// susceptible) pair; with delta = 1 each pair is attempted at most once.
struct TransmissionScript {
  std::optional<NodeId> seed_node;          // drawn from the RNG when empty
  std::map<Edge, bool> outcomes;
  std::optional<bool> fallback;             // used for pairs missing from `outcomes`

  static TransmissionScript all(bool outcome) {
    TransmissionScript s;
    s.fallback = outcome;
    return s;
  }
};

// run_cfvp with transmissions read from `script`. Throws ScriptExhausted when
// an attempt is neither listed nor covered by the fallback.
RunResult run_with_forced_outcomes(CoupledSystem& system, const TransmissionScript& script,
                                   const IsolationStrategy& strategy = {},
                                   std::uint64_t seed = 0);

// Stage trace as CSV with this header:
inline constexpr std::string_view kTraceHeader =
    "stage,newly_infected,virus_removed,cascade_removed_a,cascade_removed_b,edges_pruned,"
    "f_i_current,f_i_cumulative,functional_fraction";
void write_trace_csv(std::ostream& out, const RunResult& result);

}  // namespace cfvp

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parmax/cost.hpp"
#include "parmax/pipeline.hpp"
#include "parmax/roles.hpp"

namespace parmax {

// Nearest-rank quantile: the smallest element whose cumulative rank covers p.
// For n values this is sorted[ceil(p * n)] in 1-based terms. p in (0, 1].
double quantile_nearest_rank(std::vector<double> values, double p);

// Per-cell aggregate over the steady-state slice of one (tier, concurrency).
struct SweepResult {
  TierKind tier = TierKind::StandardShared;
  int concurrency = 1;
  std::size_t n_requests = 0;
  std::size_t n_errors = 0;
  double median_e2e_s = 0.0;
  double p95_e2e_s = 0.0;
  double mean_e2e_s = 0.0;
  double median_parallel_s = 0.0;
  std::map<AgentRole, double> per_agent_median_s;
  std::map<AgentRole, double> bottleneck_share;
  double req_per_min = 0.0;
  double success_rate = 1.0;
  double conc_per_cent = 0.0;
};

// Cost inputs aggregate() needs to price a cell: the pricing table plus the
// corpus-wide mean token counts that set the pay-per-token request price.
struct CostBasis {
  PricingTable pricing;
  double mean_input_tokens = 0.0;
  double mean_output_tokens = 0.0;
};

// Reduces a steady-state trace slice to one SweepResult. Latency statistics
// are over successful traces (at least two required); req_per_min divides
// successes by the slice's makespan (first t0 to last t5). Throws
// ValidationError when fewer than two successes remain.
SweepResult aggregate(const std::vector<PipelineTrace>& steady_traces, TierKind tier,
                      int concurrency, const CostBasis& cost);

// Parallel-phase inflation of a trace set: median(parallel phase) over the
// median of the three parallel roles' latencies pooled together, minus one.
double inflation(const std::vector<PipelineTrace>& traces);

// Closed-loop consistency: measured throughput against the Little's-law
// prediction 60 * concurrency / mean_e2e. Near 1.0 for a healthy cell.
double littles_law_ratio(const SweepResult& result);
double littles_law_ratio(double req_per_min, int concurrency, double mean_e2e_s);

// First grid interval [c_i, c_i+1] where sign(median_a - median_b) flips.
// Both series must share the same concurrency grid.
std::optional<std::pair<int, int>> find_crossover(const std::vector<SweepResult>& tier_a,
                                                  const std::vector<SweepResult>& tier_b);

// Summary CSV with the fixed column set, one row per cell:
//   tier, c, n, errors, median_s, p95_s, parallel_median_s, video_s,
//   guidance_s, code_s, synth_s, req_per_min, success_rate, conc_per_cent
extern const char* const kSummaryHeader;
void write_summary_csv(const std::vector<SweepResult>& rows, const std::filesystem::path& file);
std::string summary_csv_row(const SweepResult& row);
std::vector<SweepResult> load_summary_csv(const std::filesystem::path& file);

}  // namespace parmax

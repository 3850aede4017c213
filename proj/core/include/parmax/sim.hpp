#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "parmax/backend.hpp"
#include "parmax/corpus.hpp"
#include "parmax/pipeline.hpp"
#include "parmax/roles.hpp"
#include "parmax/tiers.hpp"

namespace parmax {

// One sweep = tiers x concurrency levels, each cell a closed-loop run where
// exactly `level` requests are kept in flight until the corpus is exhausted.
struct SweepPlan {
  std::vector<int> concurrency_levels = {1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::vector<TierKind> tiers = {TierKind::StandardShared, TierKind::PriorityQueue,
                                 TierKind::ReservedCapacity};
  std::size_t requests_per_level = 100;  // corpus queries used per cell, each exactly once
  std::uint64_t seed = 42;
  std::size_t warmup_requests = 0;  // extra leading requests excluded from statistics
  OverheadModel overheads;

  void validate() const;  // throws ValidationError
};

SweepPlan load_sweep_plan(const std::filesystem::path& file);
void write_sweep_plan(const SweepPlan& plan, const std::filesystem::path& file);

// Health counters recorded while a cell runs. The steady window starts when
// the in-flight count first reaches the target level and ends when the corpus
// is exhausted (drain start); within it the closed loop must hold the
// in-flight count exactly at the level after every processed event.
struct CellAudit {
  std::size_t boundaries_checked = 0;
  int min_inflight_steady = 0;
  int max_inflight_steady = 0;
  bool clock_monotonic = true;
  bool conservation_ok = true;  // dispatched == completed + in-flight at every boundary
  double steady_begin_s = 0.0;
  double steady_end_s = 0.0;  // drain start (last dispatch)
};

struct CellResult {
  TierKind tier = TierKind::StandardShared;
  int concurrency = 1;
  std::vector<PipelineTrace> traces;  // dispatch order
  CellAudit audit;
};

// Seed for one cell, mixed from the root seed and the cell labels.
std::uint64_t cell_seed(std::uint64_t root, TierKind tier, int level);

// Closed-loop constant-concurrency run of `corpus` against one tier model on
// a virtual clock. The first `level` queries dispatch at t=0; every
// completion immediately dispatches the next query, so the in-flight count
// stays at `level` until the corpus runs out. Event order is (time, sequence)
// and all randomness comes from `seed`, so results are bit-identical across
// runs. Queries run exactly once, in an order shuffled by the cell seed.
CellResult run_level(const TierModel& model, const Corpus& corpus, int level, std::uint64_t seed,
                     const OverheadModel& overheads = {});

using SweepGrid = std::map<std::pair<TierKind, int>, CellResult>;

// Runs every cell of the plan. Each cell derives its own seed from the plan
// seed, so cells are independent and the grid is reproducible as a whole,
// including under parallel execution (jobs > 1).
SweepGrid run_sweep(const SweepPlan& plan, const TierSet& tiers, const Corpus& corpus,
                    int jobs = 1);

// The slice of a cell's traces inside the steady-state window: drops the
// first and last `trim` requests by dispatch order, where trim is
// min(level, total/4) plus any explicit warmup. Guarantees at least two
// traces remain whenever the cell has at least two.
std::pair<std::size_t, std::size_t> steady_bounds(std::size_t total, int level,
                                                  std::size_t warmup = 0);
std::vector<PipelineTrace> steady_slice(const CellResult& cell, std::size_t warmup = 0);

}  // namespace parmax

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parmax/backend.hpp"
#include "parmax/clock.hpp"
#include "parmax/corpus.hpp"
#include "parmax/roles.hpp"

namespace parmax {

// Fixed orchestration overheads. Setup covers t0->t2 (session load then
// dispatch), return covers t4->t5.
struct OverheadModel {
  double session_load_s = 0.05;
  double dispatch_s = 0.05;
  double return_s = 0.05;

  double setup_s() const { return session_load_s + dispatch_s; }
};

// Timing points of one request:
//   t0 arrival, t1 session loaded, t2 parallel fan-out, t3 last parallel
//   agent done, t4 synthesizer done, t5 response returned.
// Timestamps are non-decreasing. For successful traces t3 - t2 equals the
// max of the three parallel latencies and t4 - t3 the synthesizer latency
// (exactly, in simulation). A failed request aborts when the failure is
// detected: the synthesizer never runs and its latency entry is absent.
struct PipelineTrace {
  std::string query_id;
  TierKind tier = TierKind::StandardShared;
  double t0 = 0, t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0;
  std::map<AgentRole, double> agent_latency_s;
  AgentRole bottleneck = AgentRole::Video;
  bool success = true;
  std::optional<ErrorKind> error_kind;

  double e2e_s() const { return t5 - t0; }
  double parallel_s() const { return t3 - t2; }
  double latency_or_zero(AgentRole role) const;
};

struct PhaseBreakdown {
  double setup_s = 0;
  double parallel_s = 0;
  double synth_s = 0;
  double return_s = 0;
  double e2e_s = 0;  // always the exact sum of the four phases
};

struct PipelineOptions {
  OverheadModel overheads;
  int in_flight = 1;
  // Order in which the three parallel calls hit the backend. Matters only
  // for backends with shared queueing state; defaults to role order.
  std::array<AgentRole, 3> dispatch_order = kParallelRoles;
};

// Runs one query through the spoke-and-wheel pipeline. With a simulated
// backend the parallel phase is three sampled latencies joined by max and the
// virtual clock is advanced to t5; with a live backend the three calls are
// issued on real threads and timestamps are measured. The argmax of the
// parallel latencies is recorded as the bottleneck, ties broken
// Video > Guidance > Code.
PipelineTrace run_pipeline(const QueryRecord& query, InferenceBackend& backend, Clock& clock,
                           const PipelineOptions& options = {});

// Which parallel role bound the phase; ties broken Video > Guidance > Code.
AgentRole bottleneck_of(const std::map<AgentRole, double>& parallel_latency);

// Additive phase decomposition of a successful trace; throws ValidationError
// on failed traces.
PhaseBreakdown decompose_trace(const PipelineTrace& trace);

// Fraction of successful traces each parallel role bound. Synthesizer is
// always present with share zero. Throws ValidationError when no trace
// succeeded.
std::map<AgentRole, double> bottleneck_share(const std::vector<PipelineTrace>& traces);

}  // namespace parmax

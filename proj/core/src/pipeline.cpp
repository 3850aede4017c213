#include "parmax/pipeline.hpp"

#include <algorithm>
#include <future>

#include "parmax/errors.hpp"

namespace parmax {

double PipelineTrace::latency_or_zero(AgentRole role) const {
  const auto it = agent_latency_s.find(role);
  return it == agent_latency_s.end() ? 0.0 : it->second;
}

AgentRole bottleneck_of(const std::map<AgentRole, double>& parallel_latency) {
  // Fixed tie-break priority: Video > Guidance > Code.
  static constexpr std::array<AgentRole, 3> order = {AgentRole::Video, AgentRole::Guidance,
                                                     AgentRole::Code};
  AgentRole best = AgentRole::Video;
  double best_latency = -1.0;
  for (AgentRole r : order) {
    const auto it = parallel_latency.find(r);
    if (it == parallel_latency.end()) continue;
    if (it->second > best_latency) {
      best = r;
      best_latency = it->second;
    }
  }
  if (best_latency < 0.0) throw ValidationError("bottleneck_of: no parallel latencies present");
  return best;
}

namespace {

AgentCall make_call(const QueryRecord& query, AgentRole role, int in_flight, double start_time) {
  AgentCall call;
  call.role = role;
  call.query_id = query.id;
  call.tokens_in = query.input_tokens[role];
  call.tokens_out = query.output_tokens[role];
  call.in_flight = in_flight;
  call.start_time_s = start_time;
  if (query.has_text) call.text = query.text[role];
  return call;
}

PipelineTrace run_simulated(const QueryRecord& query, InferenceBackend& backend, Clock& clock,
                            const PipelineOptions& options) {
  PipelineTrace trace;
  trace.query_id = query.id;
  trace.t0 = clock.now();
  trace.t1 = trace.t0 + options.overheads.session_load_s;
  trace.t2 = trace.t1 + options.overheads.dispatch_s;

  // Fan-out: three independent samples joined by max. A failed call aborts
  // the request as soon as the failure comes back.
  double max_latency = 0.0;
  double failure_at = 0.0;
  std::optional<ErrorKind> failure;
  for (AgentRole role : options.dispatch_order) {
    const AgentCallResult r = backend.call(make_call(query, role, options.in_flight, trace.t2));
    trace.agent_latency_s[role] = r.latency_s;
    max_latency = std::max(max_latency, r.latency_s);
    if (!r.success && (!failure || r.latency_s < failure_at)) {
      failure = r.error.value_or(ErrorKind::Http500);
      failure_at = r.latency_s;
    }
  }
  trace.bottleneck = bottleneck_of(trace.agent_latency_s);

  if (failure) {
    trace.success = false;
    trace.error_kind = failure;
    trace.t3 = trace.t2 + failure_at;  // abort at failure detection
    trace.t4 = trace.t3;
    trace.t5 = trace.t4 + options.overheads.return_s;
  } else {
    trace.t3 = trace.t2 + max_latency;
    const AgentCallResult synth =
        backend.call(make_call(query, AgentRole::Synthesizer, options.in_flight, trace.t3));
    trace.agent_latency_s[AgentRole::Synthesizer] = synth.latency_s;
    if (!synth.success) {
      trace.success = false;
      trace.error_kind = synth.error.value_or(ErrorKind::Http500);
    }
    trace.t4 = trace.t3 + synth.latency_s;
    trace.t5 = trace.t4 + options.overheads.return_s;
  }

  if (auto* virt = dynamic_cast<VirtualClock*>(&clock)) virt->advance_to(trace.t5);
  return trace;
}

PipelineTrace run_live(const QueryRecord& query, InferenceBackend& backend, Clock& clock,
                       const PipelineOptions& options) {
  PipelineTrace trace;
  trace.query_id = query.id;
  trace.t0 = clock.now();
  trace.t1 = clock.now();  // no session store in replay mode
  trace.t2 = clock.now();

  std::array<std::future<AgentCallResult>, 3> futures;
  for (std::size_t i = 0; i < options.dispatch_order.size(); ++i) {
    const AgentRole role = options.dispatch_order[i];
    futures[i] = std::async(std::launch::async, [&, role] {
      return backend.call(make_call(query, role, options.in_flight, trace.t2));
    });
  }
  std::optional<ErrorKind> failure;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const AgentCallResult r = futures[i].get();
    trace.agent_latency_s[options.dispatch_order[i]] = r.latency_s;
    if (!r.success && !failure) failure = r.error.value_or(ErrorKind::Http500);
  }
  trace.t3 = clock.now();
  trace.bottleneck = bottleneck_of(trace.agent_latency_s);

  if (failure) {
    trace.success = false;
    trace.error_kind = failure;
    trace.t4 = clock.now();
    trace.t5 = clock.now();
    return trace;
  }
  const AgentCallResult synth =
      backend.call(make_call(query, AgentRole::Synthesizer, options.in_flight, trace.t3));
  trace.agent_latency_s[AgentRole::Synthesizer] = synth.latency_s;
  if (!synth.success) {
    trace.success = false;
    trace.error_kind = synth.error.value_or(ErrorKind::Http500);
  }
  trace.t4 = clock.now();
  trace.t5 = clock.now();
  return trace;
}

}  // namespace

PipelineTrace run_pipeline(const QueryRecord& query, InferenceBackend& backend, Clock& clock,
                           const PipelineOptions& options) {
  return backend.simulated() ? run_simulated(query, backend, clock, options)
                             : run_live(query, backend, clock, options);
}

PhaseBreakdown decompose_trace(const PipelineTrace& trace) {
  if (!trace.success)
    throw ValidationError("decompose_trace: trace '" + trace.query_id + "' did not succeed");
  PhaseBreakdown phases;
  phases.setup_s = trace.t2 - trace.t0;
  phases.parallel_s = trace.t3 - trace.t2;
  phases.synth_s = trace.t4 - trace.t3;
  phases.return_s = trace.t5 - trace.t4;
  phases.e2e_s = phases.setup_s + phases.parallel_s + phases.synth_s + phases.return_s;
  return phases;
}

std::map<AgentRole, double> bottleneck_share(const std::vector<PipelineTrace>& traces) {
  std::size_t successes = 0;
  std::map<AgentRole, double> share = {{AgentRole::Video, 0.0},
                                       {AgentRole::Code, 0.0},
                                       {AgentRole::Guidance, 0.0},
                                       {AgentRole::Synthesizer, 0.0}};
  for (const PipelineTrace& t : traces) {
    if (!t.success) continue;
    ++successes;
    share[t.bottleneck] += 1.0;
  }
  if (successes == 0)
    throw ValidationError("bottleneck_share: no successful traces to attribute");
  for (auto& [role, count] : share) count /= static_cast<double>(successes);
  return share;
}

}  // namespace parmax

#include "parmax/sim.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <queue>

#include <json.hpp>

#include "parmax/clock.hpp"
#include "parmax/errors.hpp"
#include "parmax/rng.hpp"

namespace parmax {

using nlohmann::ordered_json;

void SweepPlan::validate() const {
  if (concurrency_levels.empty())
    throw ValidationError("sweep plan: at least one concurrency level required");
  for (std::size_t i = 0; i < concurrency_levels.size(); ++i) {
    if (concurrency_levels[i] < 1)
      throw ValidationError("sweep plan: concurrency levels must be positive");
    if (i > 0 && concurrency_levels[i] <= concurrency_levels[i - 1])
      throw ValidationError("sweep plan: concurrency levels must be strictly increasing");
  }
  if (tiers.empty()) throw ValidationError("sweep plan: at least one tier required");
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    for (std::size_t j = i + 1; j < tiers.size(); ++j) {
      if (tiers[i] == tiers[j]) throw ValidationError("sweep plan: duplicate tier listed");
    }
  }
  const int max_level = *std::max_element(concurrency_levels.begin(), concurrency_levels.end());
  if (requests_per_level < static_cast<std::size_t>(max_level))
    throw ValidationError(
        "sweep plan: requests_per_level must be at least the largest concurrency level");
  if (overheads.session_load_s < 0 || overheads.dispatch_s < 0 || overheads.return_s < 0)
    throw ValidationError("sweep plan: overheads must be non-negative");
}

SweepPlan load_sweep_plan(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open sweep plan: " + file.string());
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": invalid JSON: " + e.what());
  }
  SweepPlan plan;
  if (j.contains("concurrency_levels"))
    plan.concurrency_levels = j.at("concurrency_levels").get<std::vector<int>>();
  if (j.contains("tiers")) {
    plan.tiers.clear();
    for (const auto& name : j.at("tiers")) {
      try {
        plan.tiers.push_back(tier_from_name(name.get<std::string>()));
      } catch (const ValidationError& e) {
        throw ValidationError(file.string() + ": field 'tiers': " + e.what());
      }
    }
  }
  if (j.contains("requests_per_level"))
    plan.requests_per_level = j.at("requests_per_level").get<std::size_t>();
  if (j.contains("seed")) plan.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("warmup_requests"))
    plan.warmup_requests = j.at("warmup_requests").get<std::size_t>();
  if (j.contains("overheads")) {
    const auto& o = j.at("overheads");
    if (o.contains("session_load_s")) plan.overheads.session_load_s = o.at("session_load_s");
    if (o.contains("dispatch_s")) plan.overheads.dispatch_s = o.at("dispatch_s");
    if (o.contains("return_s")) plan.overheads.return_s = o.at("return_s");
  }
  plan.validate();
  return plan;
}

void write_sweep_plan(const SweepPlan& plan, const std::filesystem::path& file) {
  ordered_json j;
  j["concurrency_levels"] = plan.concurrency_levels;
  std::vector<std::string> tier_names;
  for (TierKind t : plan.tiers) tier_names.emplace_back(tier_name(t));
  j["tiers"] = tier_names;
  j["requests_per_level"] = plan.requests_per_level;
  j["seed"] = plan.seed;
  j["warmup_requests"] = plan.warmup_requests;
  j["overheads"] = {{"session_load_s", plan.overheads.session_load_s},
                    {"dispatch_s", plan.overheads.dispatch_s},
                    {"return_s", plan.overheads.return_s}};
  std::ofstream out(file, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write sweep plan: " + file.string());
  out << j.dump(2) << '\n';
}

std::uint64_t cell_seed(std::uint64_t root, TierKind tier, int level) {
  return derive_seed(root, std::string(tier_name(tier)) + ":c" + std::to_string(level));
}

namespace {

enum class EventKind : std::uint8_t { Dispatch, AgentComplete, RequestComplete };

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;  // total order among simultaneous events
  EventKind kind = EventKind::Dispatch;
  std::size_t request = 0;
  AgentRole role = AgentRole::Video;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct RequestRun {
  PipelineTrace trace;
  double max_parallel = 0.0;
  int parallel_outstanding = 3;
  bool has_failure = false;
  AgentRole failure_role = AgentRole::Video;
  double failure_latency = std::numeric_limits<double>::infinity();
  ErrorKind failure_kind = ErrorKind::Http500;
  bool aborted = false;
  bool done = false;
};

}  // namespace

CellResult run_level(const TierModel& model, const Corpus& corpus, int level, std::uint64_t seed,
                     const OverheadModel& overheads) {
  if (level < 1) throw ValidationError("run_level: concurrency level must be at least 1");
  if (corpus.size() < static_cast<std::size_t>(level))
    throw ValidationError("run_level: corpus has " + std::to_string(corpus.size()) +
                          " records but the concurrency level is " + std::to_string(level));
  model.validate();

  CellResult cell;
  cell.tier = model.kind;
  cell.concurrency = level;
  const std::size_t total = corpus.size();
  cell.traces.resize(total);

  SimulatedBackend backend(model, derive_seed(seed, "backend"));
  Rng order_rng(derive_seed(seed, "order"));

  // Each corpus query runs exactly once, in a per-cell shuffled order.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  order_rng.shuffle(order);

  std::priority_queue<Event, std::vector<Event>, EventAfter> events;
  std::vector<RequestRun> runs(total);
  std::uint64_t seq = 0;
  std::size_t next_query = 0;
  std::size_t dispatched = 0, completed = 0;
  int in_flight = 0;
  const int target = static_cast<int>(std::min<std::size_t>(level, total));

  const auto make_agent_call = [&](const QueryRecord& q, AgentRole role, double start) {
    AgentCall call;
    call.role = role;
    call.query_id = q.id;
    call.tokens_in = q.input_tokens[role];
    call.tokens_out = q.output_tokens[role];
    call.in_flight = in_flight;
    call.start_time_s = start;
    return call;
  };

  // Starts request `idx` at time t: bills the setup overhead, samples all
  // three parallel calls (in a per-request random order so no role is
  // systematically first into shared queueing state), and schedules their
  // completion events.
  const auto dispatch = [&](std::size_t idx, double t) {
    RequestRun& run = runs[idx];
    const QueryRecord& q = corpus[order[idx]];
    ++dispatched;
    ++in_flight;
    run.trace.query_id = q.id;
    run.trace.tier = model.kind;
    run.trace.t0 = t;
    run.trace.t1 = t + overheads.session_load_s;
    run.trace.t2 = run.trace.t1 + overheads.dispatch_s;
    std::array<AgentRole, 3> dispatch_order = kParallelRoles;
    order_rng.shuffle(dispatch_order);
    for (AgentRole role : dispatch_order) {
      const AgentCallResult r = backend.call(make_agent_call(q, role, run.trace.t2));
      run.trace.agent_latency_s[role] = r.latency_s;
      run.max_parallel = std::max(run.max_parallel, r.latency_s);
      if (!r.success && r.latency_s < run.failure_latency) {
        run.has_failure = true;
        run.failure_role = role;
        run.failure_latency = r.latency_s;
        run.failure_kind = r.error.value_or(ErrorKind::Http500);
      }
      events.push({run.trace.t2 + r.latency_s, seq++, EventKind::AgentComplete, idx, role});
    }
  };

  for (int k = 0; k < target; ++k) {
    events.push({0.0, seq++, EventKind::Dispatch, static_cast<std::size_t>(k), AgentRole::Video});
  }
  next_query = static_cast<std::size_t>(target);

  CellAudit& audit = cell.audit;
  audit.min_inflight_steady = std::numeric_limits<int>::max();
  audit.max_inflight_steady = 0;
  bool steady_started = false;
  bool draining = false;
  double prev_time = 0.0;

  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    if (ev.time < prev_time - 1e-12) audit.clock_monotonic = false;
    prev_time = std::max(prev_time, ev.time);

    switch (ev.kind) {
      case EventKind::Dispatch:
        dispatch(ev.request, ev.time);
        break;

      case EventKind::AgentComplete: {
        RequestRun& run = runs[ev.request];
        if (run.aborted || run.done) break;  // stale event after an abort
        if (ev.role == AgentRole::Synthesizer) {
          run.trace.t5 = run.trace.t4 + overheads.return_s;
          events.push({run.trace.t5, seq++, EventKind::RequestComplete, ev.request,
                       AgentRole::Synthesizer});
          break;
        }
        if (run.has_failure && ev.role == run.failure_role) {
          // Earliest failure aborts the request; the synthesizer never runs.
          run.aborted = true;
          run.trace.success = false;
          run.trace.error_kind = run.failure_kind;
          run.trace.t3 = run.trace.t2 + run.failure_latency;
          run.trace.t4 = run.trace.t3;
          run.trace.t5 = run.trace.t4 + overheads.return_s;
          events.push({run.trace.t5, seq++, EventKind::RequestComplete, ev.request, ev.role});
          break;
        }
        if (--run.parallel_outstanding == 0) {
          // Whole fan-out succeeded: join on the max and start the synthesizer.
          run.trace.t3 = run.trace.t2 + run.max_parallel;
          const QueryRecord& q = corpus[order[ev.request]];
          const AgentCallResult synth =
              backend.call(make_agent_call(q, AgentRole::Synthesizer, run.trace.t3));
          run.trace.agent_latency_s[AgentRole::Synthesizer] = synth.latency_s;
          if (!synth.success) {
            run.trace.success = false;
            run.trace.error_kind = synth.error.value_or(ErrorKind::Http500);
          }
          run.trace.t4 = run.trace.t3 + synth.latency_s;
          events.push({run.trace.t4, seq++, EventKind::AgentComplete, ev.request,
                       AgentRole::Synthesizer});
        }
        break;
      }

      case EventKind::RequestComplete: {
        RequestRun& run = runs[ev.request];
        run.done = true;
        run.trace.bottleneck = bottleneck_of(run.trace.agent_latency_s);
        cell.traces[ev.request] = std::move(run.trace);
        ++completed;
        --in_flight;
        // Closed loop: the next query starts the instant one finishes, within
        // the same event, so the in-flight count never dips between events.
        if (next_query < total) dispatch(next_query++, ev.time);
        break;
      }
    }

    // Event-boundary bookkeeping.
    if (!steady_started) {
      if (in_flight == target) {
        steady_started = true;
        audit.steady_begin_s = ev.time;
      }
    } else if (!draining && in_flight < target) {
      draining = true;
      audit.steady_end_s = ev.time;
    }
    if (dispatched != completed + static_cast<std::size_t>(in_flight))
      audit.conservation_ok = false;
    if (steady_started && !draining) {
      ++audit.boundaries_checked;
      audit.min_inflight_steady = std::min(audit.min_inflight_steady, in_flight);
      audit.max_inflight_steady = std::max(audit.max_inflight_steady, in_flight);
    }
  }

  if (audit.boundaries_checked == 0) {
    audit.min_inflight_steady = 0;
    audit.max_inflight_steady = 0;
  }
  if (!draining) audit.steady_end_s = prev_time;
  return cell;
}

SweepGrid run_sweep(const SweepPlan& plan, const TierSet& tiers, const Corpus& corpus, int jobs) {
  plan.validate();
  if (jobs < 1) throw ValidationError("run_sweep: jobs must be at least 1");
  if (corpus.size() < plan.requests_per_level)
    throw ValidationError("run_sweep: corpus has " + std::to_string(corpus.size()) +
                          " records but the plan needs " +
                          std::to_string(plan.requests_per_level) + " per level");
  const Corpus slice(corpus.begin(),
                     corpus.begin() + static_cast<std::ptrdiff_t>(plan.requests_per_level));

  std::vector<std::pair<TierKind, int>> cells;
  for (TierKind tier : plan.tiers) {
    for (int level : plan.concurrency_levels) cells.emplace_back(tier, level);
  }

  SweepGrid grid;
  std::size_t next = 0;
  while (next < cells.size()) {
    const std::size_t batch = std::min<std::size_t>(jobs, cells.size() - next);
    std::vector<std::future<CellResult>> futures;
    futures.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      const auto [tier, level] = cells[next + i];
      futures.push_back(std::async(std::launch::async, [&, tier, level] {
        return run_level(tiers.by_kind(tier), slice, level, cell_seed(plan.seed, tier, level),
                         plan.overheads);
      }));
    }
    for (std::size_t i = 0; i < batch; ++i) {
      grid[cells[next + i]] = futures[i].get();
    }
    next += batch;
  }
  return grid;
}

std::pair<std::size_t, std::size_t> steady_bounds(std::size_t total, int level,
                                                  std::size_t warmup) {
  if (total == 0) return {0, 0};
  // Trim the ramp-up and drain requests, but never below a usable middle:
  // at high concurrency relative to the corpus, cap the trim at a quarter of
  // the run on each side.
  const std::size_t trim = std::min<std::size_t>(static_cast<std::size_t>(level), total / 4);
  std::size_t lo = std::min(total, trim + warmup);
  std::size_t hi = total - std::min(trim, total - lo);
  if (hi < lo + 2) return {0, total};  // degenerate cell: keep everything
  return {lo, hi};
}

std::vector<PipelineTrace> steady_slice(const CellResult& cell, std::size_t warmup) {
  const auto [lo, hi] = steady_bounds(cell.traces.size(), cell.concurrency, warmup);
  return std::vector<PipelineTrace>(cell.traces.begin() + static_cast<std::ptrdiff_t>(lo),
                                    cell.traces.begin() + static_cast<std::ptrdiff_t>(hi));
}

}  // namespace parmax

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "parmax/rng.hpp"
#include "parmax/roles.hpp"
#include "parmax/tiers.hpp"
#include "parmax/token_bucket.hpp"

namespace parmax {

enum class ErrorKind : std::uint8_t { Http500, Timeout };

std::string_view error_kind_name(ErrorKind kind);
ErrorKind error_kind_from_name(std::string_view name);

// One agent invocation as seen by a backend.
struct AgentCall {
  AgentRole role = AgentRole::Video;
  std::string query_id;
  std::int64_t tokens_in = 0;
  std::int64_t tokens_out = 0;  // expected completion size; echoed by simulators
  int in_flight = 1;            // concurrent pipeline requests, including this one
  double start_time_s = 0.0;    // virtual-clock start; ignored by wall-clock backends
  std::string text;             // prompt payload for live endpoints
};

struct AgentCallResult {
  double latency_s = 0.0;
  bool success = true;
  std::optional<ErrorKind> error;
  std::int64_t tokens_out = 0;
  std::string text;
};

// Uniform serving contract. Simulated backends return a latency immediately
// and interpret start_time_s against the caller's virtual clock; live
// backends block and measure wall time. Implementations serialize internal
// state mutation, so a backend instance may be shared across threads.
class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;
  virtual AgentCallResult call(const AgentCall& call) = 0;

  // True when call() is instantaneous and latencies are model output.
  virtual bool simulated() const { return true; }
};

// Fixed per-role latencies; the workhorse test double and a handy way to
// replay a single known scenario.
class ConstantBackend : public InferenceBackend {
 public:
  explicit ConstantBackend(RoleMap<double> latency_s);
  AgentCallResult call(const AgentCall& call) override;

 private:
  RoleMap<double> latency_s_;
};

// Draws latencies from a TierModel: log-normal base scaled by the contention
// multiplier, plus reserved-capacity queueing delay, plus error injection.
// Deterministic for a fixed seed and call sequence.
class SimulatedBackend : public InferenceBackend {
 public:
  SimulatedBackend(TierModel model, std::uint64_t seed);
  AgentCallResult call(const AgentCall& call) override;

  const TierModel& model() const { return model_; }

 private:
  TierModel model_;
  Rng rng_;
  std::optional<TokenBucket> bucket_;
  std::mutex mu_;
};

// Distribution sampling used by SimulatedBackend, exposed for direct tests:
// base log-normal draw for the role, scaled by contention, with sigma widened
// by the tier's sigma_slope. Excludes queueing delay and error injection.
double sample_service_time(const TierModel& model, AgentRole role, int in_flight, Rng& rng);

// Serves previously recorded latencies: each (query_id, role) key holds the
// recorded latencies in order and each is served exactly once. Exhaustion or
// an unknown key raises RuntimeFailure naming the id.
class ReplayBackend : public InferenceBackend {
 public:
  // Built from any trace-like source via add(); see trace_io for loading.
  void add(const std::string& query_id, AgentRole role, double latency_s);
  AgentCallResult call(const AgentCall& call) override;

  std::size_t remaining() const;

 private:
  std::map<std::pair<std::string, AgentRole>, std::deque<double>> latencies_;
  mutable std::mutex mu_;
};

}  // namespace parmax

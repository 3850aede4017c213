#include "parmax/backend.hpp"

#include <algorithm>
#include <cmath>

#include "parmax/errors.hpp"

namespace parmax {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Http500: return "http_500";
    case ErrorKind::Timeout: return "timeout";
  }
  throw ValidationError("unknown error kind value");
}

ErrorKind error_kind_from_name(std::string_view name) {
  if (name == "http_500") return ErrorKind::Http500;
  if (name == "timeout") return ErrorKind::Timeout;
  throw ValidationError("unknown error kind '" + std::string(name) + "'");
}

ConstantBackend::ConstantBackend(RoleMap<double> latency_s) : latency_s_(latency_s) {}

AgentCallResult ConstantBackend::call(const AgentCall& call) {
  AgentCallResult result;
  result.latency_s = latency_s_[call.role];
  result.tokens_out = call.tokens_out;
  return result;
}

double sample_service_time(const TierModel& model, AgentRole role, int in_flight, Rng& rng) {
  if (in_flight < 1) throw ValidationError("sample_service_time: in_flight must be at least 1");
  const LogNormalParams base = model.agent_params(role);
  const double sigma = base.sigma + model.sigma_slope * (in_flight - 1);
  const double draw = rng.lognormal(base.mu, sigma);
  return draw * (1.0 + model.latency_slope * (in_flight - 1));
}

SimulatedBackend::SimulatedBackend(TierModel model, std::uint64_t seed)
    : model_(std::move(model)), rng_(seed) {
  model_.validate();
  if (model_.kind == TierKind::ReservedCapacity) {
    const double rate = model_.effective_capacity_tokens_per_sec();
    bucket_.emplace(rate, rate * model_.burst_seconds);
  }
}

AgentCallResult SimulatedBackend::call(const AgentCall& call) {
  std::lock_guard<std::mutex> lock(mu_);
  AgentCallResult result;
  result.tokens_out = call.tokens_out;
  double latency = sample_service_time(model_, call.role, call.in_flight, rng_);
  if (bucket_) {
    latency +=
        bucket_->acquire(static_cast<double>(call.tokens_in + call.tokens_out), call.start_time_s);
  }
  result.latency_s = latency;
  if (model_.error_rate > 0.0 && call.in_flight >= model_.error_min_inflight &&
      rng_.bernoulli(model_.error_rate)) {
    result.success = false;
    result.error = ErrorKind::Http500;
  }
  return result;
}

void ReplayBackend::add(const std::string& query_id, AgentRole role, double latency_s) {
  std::lock_guard<std::mutex> lock(mu_);
  latencies_[{query_id, role}].push_back(latency_s);
}

AgentCallResult ReplayBackend::call(const AgentCall& call) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = latencies_.find({call.query_id, call.role});
  if (it == latencies_.end())
    throw RuntimeFailure("replay backend: no recorded latency for query '" + call.query_id +
                         "' role '" + std::string(role_name(call.role)) + "'");
  if (it->second.empty())
    throw RuntimeFailure("replay backend: recorded latencies exhausted for query '" +
                         call.query_id + "' role '" + std::string(role_name(call.role)) + "'");
  AgentCallResult result;
  result.latency_s = it->second.front();
  it->second.pop_front();
  result.tokens_out = call.tokens_out;
  return result;
}

std::size_t ReplayBackend::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t n = 0;
  for (const auto& [key, queue] : latencies_) n += queue.size();
  return n;
}

}  // namespace parmax

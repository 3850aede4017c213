#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "parmax/roles.hpp"

namespace parmax {

// Log-normal in (location, scale) form: median = exp(mu), P95 = exp(mu + 1.6449 sigma).
struct LogNormalParams {
  double mu = 0.0;
  double sigma = 0.0;

  double median() const;
  double p95() const;
};

// Closed-form fit from an observed (median, p95) pair:
//   mu = ln(median), sigma = ln(p95 / median) / 1.6449.
// Both inputs must be positive with p95 >= median.
LogNormalParams calibrate_lognormal(double median_s, double p95_s);

// Everything the simulated backend needs to serve one tier.
//
// Latency for a call is base_draw * (1 + latency_slope * (in_flight - 1)),
// with the draw's sigma widened by sigma_slope * (in_flight - 1); reserved
// capacity adds token-bucket queueing delay on top instead of a slope.
struct TierModel {
  TierKind kind = TierKind::StandardShared;

  RoleMap<double> base_median_s;  // per-agent unloaded medians
  double sigma = 0.0;             // shared per-agent scale parameter

  double latency_slope = 0.0;  // multiplicative contention per extra in-flight request
  double sigma_slope = 0.0;    // additive sigma widening per extra in-flight request

  double error_rate = 0.0;    // per-call probability of an http_500
  int error_min_inflight = 0; // errors only injected at or above this load

  // Reserved-capacity (provisioned) parameters. The nominal pool is
  // tokens_per_gsu * gsu_count; the bucket drains calls' total tokens and
  // refills at the effective rate nominal * capacity_multiplier, holding at
  // most burst_seconds worth of headroom.
  double capacity_tokens_per_sec = 0.0;
  double tokens_per_gsu = 0.0;
  int gsu_count = 0;
  double capacity_multiplier = 1.0;
  double burst_seconds = 1.0;

  LogNormalParams agent_params(AgentRole role) const;
  double effective_capacity_tokens_per_sec() const {
    return capacity_tokens_per_sec * capacity_multiplier;
  }
  void validate() const;  // throws ValidationError
};

struct TierSet {
  TierModel standard;
  TierModel priority;
  TierModel provisioned;

  TierModel& by_kind(TierKind kind);
  const TierModel& by_kind(TierKind kind) const;
};

// The bundled calibration measured on the Gemini 2.5 Flash tiers: per-agent
// unloaded medians plus contention parameters that reproduce the benchmarked
// end-to-end latency behavior of each tier.
TierSet default_tier_models();

// JSON round-trip for tier configuration files.
TierSet load_tier_set(const std::filesystem::path& file);
void write_tier_set(const TierSet& tiers, const std::filesystem::path& file);

}  // namespace parmax

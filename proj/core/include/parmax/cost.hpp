#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "parmax/money.hpp"
#include "parmax/roles.hpp"

namespace parmax {

// Per-token rates are stored in nano-dollars per token, which is numerically
// the published dollars-per-million-tokens times 1000 - integral for every
// published rate, so request pricing is exact integer arithmetic.
struct PricingTable {
  std::int64_t standard_input_nanos_per_token = 300;    // $0.30 / M tokens
  std::int64_t standard_output_nanos_per_token = 2500;  // $2.50 / M tokens
  std::int64_t priority_input_nanos_per_token = 540;    // $0.54 / M tokens
  std::int64_t priority_output_nanos_per_token = 4500;  // $4.50 / M tokens

  Money gsu_monthly_1mo = Money::from_usd_int(2700);   // 1-month commitment
  Money gsu_monthly_12mo = Money::from_usd_int(2000);  // 12-month commitment
  int commitment_months = 1;                           // which GSU rate applies
  int gsu_count = 7;

  int semester_months = 4;
  std::int64_t minutes_per_month = 43'200;  // 30 days

  Money gsu_monthly_rate() const;
  void validate() const;  // throws ValidationError (priority must be 1.8x standard, etc.)
};

PricingTable load_pricing(const std::filesystem::path& file);  // JSON overrides of defaults
void write_pricing(const PricingTable& pricing, const std::filesystem::path& file);

// GSUs needed at a given enrollment, for provisioned cost amortization.
// Lookup is exact-match on the benchmarked scale points.
struct GsuScalingProfile {
  std::map<std::int64_t, int> gsus_by_enrollment = {{40, 7}, {400, 35}, {4000, 175}, {16000, 350}};

  int gsus_for(std::int64_t enrollment) const;  // throws ValidationError when absent
};

// Pay-per-token price of one pipeline request (all four agent calls).
// Provisioned capacity has no per-request price; asking for one is an error.
Money per_request_cost(TierKind tier, const PricingTable& pricing, std::int64_t input_tokens,
                       std::int64_t output_tokens);

// Semester cost of one student. Pay-per-token tiers: queries * request price.
// Provisioned: enrollment's GSU block amortized over the semester and class.
Money per_student_semester_cost(TierKind tier, const PricingTable& pricing,
                                std::int64_t queries_per_student, std::int64_t input_tokens,
                                std::int64_t output_tokens, std::int64_t enrollment,
                                const GsuScalingProfile& profile = {});

// Cost-efficiency: sustained concurrency per cent-per-minute of spend.
// Pay-per-token: cost/min = req_per_min * request price. Provisioned: the
// reserved block's amortized cents per minute, independent of traffic.
double conc_per_cent(TierKind tier, const PricingTable& pricing, double concurrency,
                     double req_per_min, Money request_cost);

// Cents per minute of the reserved block (gsu_count * monthly rate spread
// over minutes_per_month).
double reserved_cents_per_min(const PricingTable& pricing);

// Scales a committed-capacity cost by the fraction of hours actually used.
Money utilization_adjusted(Money full_cost, double active_hours, double total_hours);

struct TierRecommendation {
  TierKind tier = TierKind::StandardShared;
  bool consider_reserved = false;
  std::string regime;  // seminar / classroom / department / university
  std::string rationale;
};

// Operating-regime rule set: peak concurrency <= 10 fits standard serving,
// anything larger needs priority; predictable traffic flags reserved
// capacity as worth costing out.
TierRecommendation recommend_tier(std::int64_t enrollment, int peak_concurrency,
                                  bool traffic_predictable);

}  // namespace parmax

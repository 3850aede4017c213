#include "parmax/cost.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parmax/errors.hpp"

namespace parmax {

Money PricingTable::gsu_monthly_rate() const {
  return commitment_months == 12 ? gsu_monthly_12mo : gsu_monthly_1mo;
}

void PricingTable::validate() const {
  if (standard_input_nanos_per_token <= 0 || standard_output_nanos_per_token <= 0 ||
      priority_input_nanos_per_token <= 0 || priority_output_nanos_per_token <= 0)
    throw ValidationError("pricing: token rates must be positive");
  auto near_1_8x = [](std::int64_t priority, std::int64_t standard) {
    return std::abs(static_cast<double>(priority) - 1.8 * static_cast<double>(standard)) <= 0.5;
  };
  if (!near_1_8x(priority_input_nanos_per_token, standard_input_nanos_per_token) ||
      !near_1_8x(priority_output_nanos_per_token, standard_output_nanos_per_token))
    throw ValidationError("pricing: priority rates must be 1.8x the standard rates");
  if (gsu_monthly_1mo.nanos() <= 0 || gsu_monthly_12mo.nanos() <= 0)
    throw ValidationError("pricing: GSU monthly rates must be positive");
  if (commitment_months != 1 && commitment_months != 12)
    throw ValidationError("pricing: commitment_months must be 1 or 12");
  if (gsu_count <= 0) throw ValidationError("pricing: gsu_count must be positive");
  if (semester_months <= 0) throw ValidationError("pricing: semester_months must be positive");
  if (minutes_per_month <= 0) throw ValidationError("pricing: minutes_per_month must be positive");
}

namespace {

using json = nlohmann::ordered_json;

std::int64_t int_field(const json& doc, const char* key, std::int64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw ParseError(std::string("pricing: ") + key + " must be an integer");
  return v.get<std::int64_t>();
}

Money usd_field(const json& doc, const char* key, Money fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ParseError(std::string("pricing: ") + key + " must be a number");
  return Money::from_usd(v.get<double>());
}

}  // namespace

PricingTable load_pricing(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open for reading: " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(file.string() + ": pricing table must be a JSON object");

  PricingTable p;
  p.standard_input_nanos_per_token =
      int_field(doc, "standard_input_nanos_per_token", p.standard_input_nanos_per_token);
  p.standard_output_nanos_per_token =
      int_field(doc, "standard_output_nanos_per_token", p.standard_output_nanos_per_token);
  p.priority_input_nanos_per_token =
      int_field(doc, "priority_input_nanos_per_token", p.priority_input_nanos_per_token);
  p.priority_output_nanos_per_token =
      int_field(doc, "priority_output_nanos_per_token", p.priority_output_nanos_per_token);
  p.gsu_monthly_1mo = usd_field(doc, "gsu_monthly_usd_1mo", p.gsu_monthly_1mo);
  p.gsu_monthly_12mo = usd_field(doc, "gsu_monthly_usd_12mo", p.gsu_monthly_12mo);
  p.commitment_months =
      static_cast<int>(int_field(doc, "commitment_months", p.commitment_months));
  p.gsu_count = static_cast<int>(int_field(doc, "gsu_count", p.gsu_count));
  p.semester_months = static_cast<int>(int_field(doc, "semester_months", p.semester_months));
  p.minutes_per_month = int_field(doc, "minutes_per_month", p.minutes_per_month);
  p.validate();
  return p;
}

void write_pricing(const PricingTable& pricing, const std::filesystem::path& file) {
  json doc;
  doc["standard_input_nanos_per_token"] = pricing.standard_input_nanos_per_token;
  doc["standard_output_nanos_per_token"] = pricing.standard_output_nanos_per_token;
  doc["priority_input_nanos_per_token"] = pricing.priority_input_nanos_per_token;
  doc["priority_output_nanos_per_token"] = pricing.priority_output_nanos_per_token;
  doc["gsu_monthly_usd_1mo"] = pricing.gsu_monthly_1mo.usd();
  doc["gsu_monthly_usd_12mo"] = pricing.gsu_monthly_12mo.usd();
  doc["commitment_months"] = pricing.commitment_months;
  doc["gsu_count"] = pricing.gsu_count;
  doc["semester_months"] = pricing.semester_months;
  doc["minutes_per_month"] = pricing.minutes_per_month;
  std::ofstream out(file, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open for writing: " + file.string());
  out << doc.dump(2) << '\n';
  if (!out) throw RuntimeFailure("failed writing " + file.string());
}

int GsuScalingProfile::gsus_for(std::int64_t enrollment) const {
  auto it = gsus_by_enrollment.find(enrollment);
  if (it == gsus_by_enrollment.end())
    throw ValidationError("gsu profile: no entry for enrollment " + std::to_string(enrollment));
  return it->second;
}

Money per_request_cost(TierKind tier, const PricingTable& pricing, std::int64_t input_tokens,
                       std::int64_t output_tokens) {
  if (input_tokens < 0 || output_tokens < 0)
    throw ValidationError("per_request_cost: token counts must be non-negative");
  std::int64_t in_rate = 0, out_rate = 0;
  switch (tier) {
    case TierKind::StandardShared:
      in_rate = pricing.standard_input_nanos_per_token;
      out_rate = pricing.standard_output_nanos_per_token;
      break;
    case TierKind::PriorityQueue:
      in_rate = pricing.priority_input_nanos_per_token;
      out_rate = pricing.priority_output_nanos_per_token;
      break;
    case TierKind::ReservedCapacity:
      throw ValidationError("per_request_cost: reserved capacity is priced per GSU, not per token");
  }
  return Money::from_nanos(input_tokens * in_rate + output_tokens * out_rate);
}

Money per_student_semester_cost(TierKind tier, const PricingTable& pricing,
                                std::int64_t queries_per_student, std::int64_t input_tokens,
                                std::int64_t output_tokens, std::int64_t enrollment,
                                const GsuScalingProfile& profile) {
  if (queries_per_student < 0)
    throw ValidationError("per_student_semester_cost: queries must be non-negative");
  if (enrollment < 1) throw ValidationError("per_student_semester_cost: enrollment must be positive");
  if (tier != TierKind::ReservedCapacity)
    return per_request_cost(tier, pricing, input_tokens, output_tokens) * queries_per_student;
  const int gsus = profile.gsus_for(enrollment);
  const Money block = pricing.gsu_monthly_rate() * gsus * pricing.semester_months;
  return block.divided_by(enrollment);
}

double reserved_cents_per_min(const PricingTable& pricing) {
  return pricing.gsu_monthly_rate().cents() * pricing.gsu_count /
         static_cast<double>(pricing.minutes_per_month);
}

double conc_per_cent(TierKind tier, const PricingTable& pricing, double concurrency,
                     double req_per_min, Money request_cost) {
  if (!(concurrency > 0.0)) throw ValidationError("conc_per_cent: concurrency must be positive");
  double cost_per_min_cents = 0.0;
  if (tier == TierKind::ReservedCapacity) {
    cost_per_min_cents = reserved_cents_per_min(pricing);
  } else {
    if (req_per_min < 0.0) throw ValidationError("conc_per_cent: negative request rate");
    cost_per_min_cents = req_per_min * request_cost.cents();
  }
  if (!(cost_per_min_cents > 0.0))
    throw ValidationError("conc_per_cent: cost per minute must be positive");
  return concurrency / cost_per_min_cents;
}

Money utilization_adjusted(Money full_cost, double active_hours, double total_hours) {
  if (!(active_hours > 0.0)) throw ValidationError("utilization_adjusted: active hours must be positive");
  if (active_hours > total_hours)
    throw ValidationError("utilization_adjusted: active hours exceed total hours");
  const double scaled = static_cast<double>(full_cost.nanos()) * (active_hours / total_hours);
  return Money::from_nanos(std::llround(scaled));
}

TierRecommendation recommend_tier(std::int64_t enrollment, int peak_concurrency,
                                  bool traffic_predictable) {
  if (enrollment < 1) throw ValidationError("recommend_tier: enrollment must be positive");
  if (peak_concurrency < 1) throw ValidationError("recommend_tier: peak concurrency must be positive");

  TierRecommendation rec;
  if (enrollment <= 20) {
    rec.regime = "seminar";
  } else if (enrollment <= 150) {
    rec.regime = "classroom";
  } else if (enrollment <= 1500) {
    rec.regime = "department";
  } else {
    rec.regime = "university";
  }

  std::ostringstream why;
  if (peak_concurrency <= 10) {
    rec.tier = TierKind::StandardShared;
    why << "peak concurrency " << peak_concurrency
        << " stays within the range where standard pay-per-token latency holds up (" << rec.regime
        << " regime, " << enrollment << " students)";
  } else {
    rec.tier = TierKind::PriorityQueue;
    why << "peak concurrency " << peak_concurrency
        << " exceeds 10, where standard-tier latency degrades; priority keeps medians flat ("
        << rec.regime << " regime, " << enrollment << " students)";
  }
  if (traffic_predictable) {
    rec.consider_reserved = true;
    why << "; traffic is predictable, so reserved capacity is worth costing out - committed"
           " blocks bill for idle hours, so check utilization first";
  }
  rec.rationale = why.str();
  return rec;
}

}  // namespace parmax

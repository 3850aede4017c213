#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "parmax/cost.hpp"
#include "parmax/errors.hpp"

using nlohmann::ordered_json;

namespace parmax::tools {

namespace {

struct CostOptions {
  std::string tier;
  std::int64_t queries = 10'000;
  std::int64_t input_tokens = 6'671;
  std::int64_t output_tokens = 767;
  std::int64_t enrollment = 0;
  bool have_enrollment = false;
  double active_hours = 0.0;
  double total_hours = 0.0;
  bool have_hours = false;
  std::string pricing_file;
  bool show_pricing = false;
  std::string format = "text";
};

std::string usd_per_mtok(std::int64_t nanos_per_token) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "$%.2f/M", static_cast<double>(nanos_per_token) / 1000.0);
  return buf;
}

void print_pricing(const PricingTable& pricing, bool json_format) {
  if (json_format) {
    ordered_json out;
    out["standard"] = {{"input_usd_per_mtok", pricing.standard_input_nanos_per_token / 1000.0},
                       {"output_usd_per_mtok", pricing.standard_output_nanos_per_token / 1000.0}};
    out["priority"] = {{"input_usd_per_mtok", pricing.priority_input_nanos_per_token / 1000.0},
                       {"output_usd_per_mtok", pricing.priority_output_nanos_per_token / 1000.0}};
    out["provisioned"] = {{"gsu_monthly_usd_1mo", pricing.gsu_monthly_1mo.usd()},
                          {"gsu_monthly_usd_12mo", pricing.gsu_monthly_12mo.usd()},
                          {"commitment_months", pricing.commitment_months},
                          {"gsu_count", pricing.gsu_count},
                          {"semester_months", pricing.semester_months},
                          {"minutes_per_month", pricing.minutes_per_month},
                          {"reserved_cents_per_min", reserved_cents_per_min(pricing)}};
    std::cout << out.dump(2) << '\n';
    return;
  }
  std::cout << "pricing:\n"
            << "  standard     " << usd_per_mtok(pricing.standard_input_nanos_per_token)
            << " input, " << usd_per_mtok(pricing.standard_output_nanos_per_token) << " output\n"
            << "  priority     " << usd_per_mtok(pricing.priority_input_nanos_per_token)
            << " input, " << usd_per_mtok(pricing.priority_output_nanos_per_token) << " output\n"
            << "  provisioned  " << pricing.gsu_monthly_1mo.display() << "/GSU/mo (1-mo commit), "
            << pricing.gsu_monthly_12mo.display() << "/GSU/mo (12-mo commit), " << pricing.gsu_count
            << " GSUs";
  char tail[96];
  std::snprintf(tail, sizeof(tail), " -> %.2f cents/min amortized\n",
                reserved_cents_per_min(pricing));
  std::cout << tail;
}

void run_cost_cmd(const CostOptions& opts) {
  PricingTable pricing = opts.pricing_file.empty() ? PricingTable{} : load_pricing(opts.pricing_file);
  pricing.validate();

  if (opts.show_pricing) {
    print_pricing(pricing, want_json(opts.format));
    if (opts.tier.empty()) return;
  }
  if (opts.tier.empty())
    throw ParseError("--tier is required (or use --show-pricing alone)");
  const TierKind tier = tier_from_name(opts.tier);

  if (tier != TierKind::ReservedCapacity && opts.have_hours)
    throw ParseError("--active-hours/--total-hours apply to the provisioned tier only");
  if (tier == TierKind::ReservedCapacity && !opts.have_enrollment)
    throw ParseError("--enrollment is required for the provisioned tier");

  ordered_json out;
  ordered_json formulas = ordered_json::object();
  out["tier"] = std::string(tier_name(tier));
  char line[256];

  if (tier != TierKind::ReservedCapacity) {
    const Money request = per_request_cost(tier, pricing, opts.input_tokens, opts.output_tokens);
    const Money student = per_student_semester_cost(tier, pricing, opts.queries, opts.input_tokens,
                                                    opts.output_tokens,
                                                    opts.have_enrollment ? opts.enrollment : 1);
    const std::int64_t in_rate = tier == TierKind::StandardShared
                                     ? pricing.standard_input_nanos_per_token
                                     : pricing.priority_input_nanos_per_token;
    const std::int64_t out_rate = tier == TierKind::StandardShared
                                      ? pricing.standard_output_nanos_per_token
                                      : pricing.priority_output_nanos_per_token;
    std::snprintf(line, sizeof(line), "(%lld in x %s + %lld out x %s) = %s",
                  static_cast<long long>(opts.input_tokens), usd_per_mtok(in_rate).c_str(),
                  static_cast<long long>(opts.output_tokens), usd_per_mtok(out_rate).c_str(),
                  request.display().c_str());
    formulas["per_request"] = line;
    std::snprintf(line, sizeof(line), "%lld queries x %s = %s",
                  static_cast<long long>(opts.queries), request.display().c_str(),
                  student.display().c_str());
    formulas["per_student_semester"] = line;

    out["input_tokens"] = opts.input_tokens;
    out["output_tokens"] = opts.output_tokens;
    out["queries_per_student"] = opts.queries;
    out["per_request_usd"] = request.usd();
    out["per_student_semester_usd"] = student.usd();
  } else {
    const GsuScalingProfile profile;
    const int gsus = profile.gsus_for(opts.enrollment);
    const Money monthly = pricing.gsu_monthly_rate() * gsus;
    const Money semester_block = monthly * pricing.semester_months;
    const Money student = per_student_semester_cost(tier, pricing, opts.queries, opts.input_tokens,
                                                    opts.output_tokens, opts.enrollment);

    std::snprintf(line, sizeof(line), "%d GSU x %s/mo = %s/mo", gsus,
                  pricing.gsu_monthly_rate().display().c_str(), monthly.display().c_str());
    formulas["monthly_block"] = line;
    std::snprintf(line, sizeof(line), "%s/mo x %d mo = %s", monthly.display().c_str(),
                  pricing.semester_months, semester_block.display().c_str());
    formulas["semester_block"] = line;
    std::snprintf(line, sizeof(line), "%s / %lld students = %s", semester_block.display().c_str(),
                  static_cast<long long>(opts.enrollment), student.display().c_str());
    formulas["per_student_semester"] = line;

    out["enrollment"] = opts.enrollment;
    out["gsus"] = gsus;
    out["monthly_block_usd"] = monthly.usd();
    out["semester_block_usd"] = semester_block.usd();
    out["per_student_semester_usd"] = student.usd();

    if (opts.have_hours) {
      const Money adjusted_monthly =
          utilization_adjusted(monthly, opts.active_hours, opts.total_hours);
      const Money adjusted_semester =
          utilization_adjusted(semester_block, opts.active_hours, opts.total_hours);
      const Money adjusted_student =
          adjusted_semester.divided_by(opts.enrollment);
      const double fraction = opts.active_hours / opts.total_hours;
      std::snprintf(line, sizeof(line), "%s/mo x %.4g/%.4g hours = %s/mo",
                    monthly.display().c_str(), opts.active_hours, opts.total_hours,
                    adjusted_monthly.display().c_str());
      formulas["utilization_adjusted_monthly"] = line;

      ordered_json util;
      util["active_hours"] = opts.active_hours;
      util["total_hours"] = opts.total_hours;
      util["fraction"] = fraction;
      util["adjusted_monthly_usd"] = adjusted_monthly.usd();
      util["adjusted_semester_usd"] = adjusted_semester.usd();
      util["adjusted_per_student_usd"] = adjusted_student.usd();
      out["utilization"] = std::move(util);
    }
  }
  out["formulas"] = formulas;

  if (want_json(opts.format)) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "tier: " << out["tier"].get<std::string>() << '\n';
    for (const auto& [name, formula] : formulas.items()) {
      std::cout << "  " << name << " = " << formula.get<std::string>() << '\n';
    }
    if (out.contains("utilization")) {
      const auto& util = out["utilization"];
      std::snprintf(line, sizeof(line),
                    "  utilization = %.4g of %.4g hours -> %.4g%% of always-on",
                    util["active_hours"].get<double>(), util["total_hours"].get<double>(),
                    util["fraction"].get<double>() * 100.0);
      std::cout << line << '\n';
    }
  }
}

}  // namespace

void register_cost(CLI::App& app) {
  auto opts = std::make_shared<CostOptions>();
  auto* cmd = app.add_subcommand(
      "cost", "Price a deployment scenario: per-request, per-student, and reserved-block figures");
  cmd->add_option("--tier", opts->tier, "Serving tier to price")
      ->check(CLI::IsMember({"standard", "priority", "provisioned"}));
  cmd->add_option("--queries", opts->queries, "Queries per student per semester")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--input-tokens", opts->input_tokens, "Input tokens per request (all agents)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--output-tokens", opts->output_tokens, "Output tokens per request (all agents)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  auto* enrollment = cmd->add_option("--enrollment", opts->enrollment,
                                     "Class size (required for the provisioned tier)")
                         ->check(CLI::PositiveNumber);
  auto* active = cmd->add_option("--active-hours", opts->active_hours,
                                 "Hours per month the reserved block is actually used")
                     ->check(CLI::PositiveNumber);
  auto* total = cmd->add_option("--total-hours", opts->total_hours,
                                "Hours per month the reserved block is billed for")
                    ->check(CLI::PositiveNumber);
  active->needs(total);
  total->needs(active);
  cmd->add_option("--pricing", opts->pricing_file, "Pricing table JSON overrides")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--show-pricing", opts->show_pricing, "Print the effective pricing table");
  add_format_option(*cmd, opts->format);
  cmd->callback([opts, enrollment, active] {
    opts->have_enrollment = enrollment->count() > 0;
    opts->have_hours = active->count() > 0;
    run_cost_cmd(*opts);
  });
}

}  // namespace parmax::tools

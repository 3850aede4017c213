#include <iostream>
#include <memory>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "parmax/cost.hpp"

using nlohmann::ordered_json;

namespace parmax::tools {

namespace {

struct RecommendOptions {
  std::int64_t enrollment = 0;
  int peak_concurrency = 0;
  bool predictable = false;
  std::string format = "text";
};

void run_recommend_cmd(const RecommendOptions& opts) {
  const TierRecommendation rec =
      recommend_tier(opts.enrollment, opts.peak_concurrency, opts.predictable);
  if (want_json(opts.format)) {
    ordered_json out;
    out["tier"] = std::string(tier_name(rec.tier));
    out["consider_reserved"] = rec.consider_reserved;
    out["regime"] = rec.regime;
    out["rationale"] = rec.rationale;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "tier: " << tier_name(rec.tier) << '\n'
              << "regime: " << rec.regime << '\n'
              << "consider reserved capacity: " << (rec.consider_reserved ? "yes" : "no") << '\n'
              << "rationale: " << rec.rationale << '\n';
  }
}

}  // namespace

void register_recommend(CLI::App& app) {
  auto opts = std::make_shared<RecommendOptions>();
  auto* cmd =
      app.add_subcommand("recommend", "Recommend a serving tier for a deployment scenario");
  cmd->add_option("--enrollment", opts->enrollment, "Class size")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--peak-concurrency", opts->peak_concurrency,
                  "Peak simultaneous student sessions")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--predictable", opts->predictable,
                "Traffic follows a known schedule (flags reserved capacity as a candidate)");
  add_format_option(*cmd, opts->format);
  cmd->callback([opts] { run_recommend_cmd(*opts); });
}

}  // namespace parmax::tools

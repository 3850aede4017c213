#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "manifest.hpp"
#include "parmax/corpus.hpp"
#include "parmax/errors.hpp"
#include "parmax/sim.hpp"
#include "parmax/stats.hpp"
#include "parmax/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace parmax::tools {

namespace {

struct SweepOptions {
  std::string plan_file;
  std::string corpus_file;
  std::string tiers_file;
  std::string pricing_file;
  std::string out_dir;
  int jobs = 1;
  std::string format = "text";
};

std::uint64_t parse_seed_env(const char* text) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text, &end, 10);
  if (errno != 0 || end == text || *end != '\0')
    throw ValidationError(std::string("PARMAX_SEED is not an unsigned integer: '") + text + "'");
  return static_cast<std::uint64_t>(value);
}

ordered_json plan_json(const SweepPlan& plan) {
  ordered_json j;
  j["concurrency_levels"] = plan.concurrency_levels;
  auto tiers = ordered_json::array();
  for (TierKind t : plan.tiers) tiers.push_back(std::string(tier_name(t)));
  j["tiers"] = std::move(tiers);
  j["requests_per_level"] = plan.requests_per_level;
  j["seed"] = plan.seed;
  j["warmup_requests"] = plan.warmup_requests;
  j["overheads"] = {{"session_load_s", plan.overheads.session_load_s},
                    {"dispatch_s", plan.overheads.dispatch_s},
                    {"return_s", plan.overheads.return_s}};
  return j;
}

void run_sweep_cmd(const SweepOptions& opts) {
  ManifestBuilder manifest("sweep");

  SweepPlan plan = opts.plan_file.empty() ? SweepPlan{} : load_sweep_plan(opts.plan_file);
  if (const char* env_seed = std::getenv("PARMAX_SEED")) plan.seed = parse_seed_env(env_seed);
  plan.validate();

  const TierSet tiers =
      opts.tiers_file.empty() ? default_tier_models() : load_tier_set(opts.tiers_file);

  Corpus corpus;
  const bool generated_corpus = opts.corpus_file.empty();
  if (generated_corpus) {
    corpus = synth_corpus(plan.requests_per_level, SynthTarget{}, plan.seed);
  } else {
    corpus = load_corpus(opts.corpus_file);
  }

  PricingTable pricing = opts.pricing_file.empty() ? PricingTable{} : load_pricing(opts.pricing_file);
  pricing.validate();

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  const SweepGrid grid = run_sweep(plan, tiers, corpus, opts.jobs);

  const CorpusStats cstats = corpus_stats(corpus);
  CostBasis basis;
  basis.pricing = pricing;
  basis.mean_input_tokens = cstats.mean_input_tokens;
  basis.mean_output_tokens = cstats.mean_output_tokens;

  ordered_json cell_seeds = ordered_json::object();
  std::vector<SweepResult> summary;
  std::size_t trace_files = 0;
  for (const auto& [key, cell] : grid) {
    const fs::path trace_path = out_dir / cell_file_name(cell.tier, cell.concurrency);
    write_traces(cell.traces, trace_path);
    manifest.add_output(trace_path);
    ++trace_files;

    cell_seeds[trace_path.stem().string()] = cell_seed(plan.seed, cell.tier, cell.concurrency);
    summary.push_back(
        aggregate(steady_slice(cell, plan.warmup_requests), cell.tier, cell.concurrency, basis));
  }

  const fs::path summary_path = out_dir / "summary.csv";
  write_summary_csv(summary, summary_path);
  manifest.add_output(summary_path);

  if (generated_corpus) {
    const fs::path corpus_path = out_dir / "corpus.jsonl";
    write_corpus(corpus, corpus_path);
    manifest.add_output(corpus_path);
  } else {
    manifest.add_input(opts.corpus_file);
  }
  if (!opts.plan_file.empty()) manifest.add_input(opts.plan_file);
  if (!opts.tiers_file.empty()) manifest.add_input(opts.tiers_file);
  if (!opts.pricing_file.empty()) manifest.add_input(opts.pricing_file);

  manifest.extra()["plan"] = plan_json(plan);
  manifest.extra()["seeds"] = {{"root", plan.seed}, {"cells", cell_seeds}};
  const fs::path manifest_path = manifest.write(out_dir);

  if (want_json(opts.format)) {
    ordered_json out;
    out["out_dir"] = out_dir.string();
    out["trace_files"] = trace_files;
    out["summary"] = summary_path.filename().string();
    out["manifest"] = manifest_path.filename().string();
    out["seed"] = plan.seed;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "wrote " << trace_files << " trace files, summary.csv"
              << (generated_corpus ? ", corpus.jsonl" : "") << " and manifest.json to "
              << out_dir.string() << " (seed " << plan.seed << ")\n";
  }
}

}  // namespace

void register_sweep(CLI::App& app) {
  auto opts = std::make_shared<SweepOptions>();
  auto* cmd = app.add_subcommand(
      "sweep", "Run the closed-loop concurrency sweep and write per-cell traces");
  cmd->add_option("--plan", opts->plan_file, "Sweep plan JSON (defaults to the built-in plan)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--corpus", opts->corpus_file,
                  "Query corpus JSONL (defaults to a generated synthetic corpus, which is then"
                  " written to the output directory)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--tiers", opts->tiers_file,
                  "Tier model JSON (defaults to the bundled calibration)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--pricing", opts->pricing_file,
                  "Pricing table JSON overrides (defaults to the published rates)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts->out_dir, "Output directory (created if missing)")->required();
  cmd->add_option("--jobs", opts->jobs, "Simulate up to N cells in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_format_option(*cmd, opts->format);
  cmd->callback([opts] { run_sweep_cmd(*opts); });
}

}  // namespace parmax::tools

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "manifest.hpp"
#include "parmax/errors.hpp"
#include "parmax/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace parmax::tools {

namespace {

struct ReportOptions {
  std::string summary_file;
  std::string pricing_file;
  std::string out_dir;
  std::int64_t queries = 10'000;
  std::int64_t input_tokens = 6'671;
  std::int64_t output_tokens = 767;
  std::string format = "text";
};

// Reject a malformed summary up front, naming exactly the columns it lacks.
void check_summary_columns(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open for reading: " + file.string());
  std::string header;
  if (!std::getline(in, header)) throw ParseError(file.string() + ": empty file");

  std::vector<std::string> have;
  std::stringstream ss(header);
  std::string field;
  while (std::getline(ss, field, ',')) have.push_back(field);

  std::vector<std::string> missing;
  std::stringstream expected(kSummaryHeader);
  while (std::getline(expected, field, ',')) {
    if (std::find(have.begin(), have.end(), field) == have.end()) missing.push_back(field);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& name : missing) names += (names.empty() ? "" : ", ") + name;
    throw ParseError(file.string() + ": summary is missing columns: " + names);
  }
}

void write_lines(const fs::path& file, const std::string& header,
                 const std::vector<std::string>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open for writing: " + file.string());
  out << header << '\n';
  for (const auto& row : rows) out << row << '\n';
  if (!out) throw RuntimeFailure("failed writing " + file.string());
}

void run_report_cmd(const ReportOptions& opts) {
  ManifestBuilder manifest("report");

  check_summary_columns(opts.summary_file);
  const std::vector<SweepResult> rows = load_summary_csv(opts.summary_file);
  if (rows.empty()) throw ParseError(opts.summary_file + ": no data rows");
  manifest.add_input(opts.summary_file);

  PricingTable pricing = opts.pricing_file.empty() ? PricingTable{} : load_pricing(opts.pricing_file);
  pricing.validate();
  if (!opts.pricing_file.empty()) manifest.add_input(opts.pricing_file);

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  char line[256];

  // Median latency with the P95 band, one series per tier.
  std::vector<std::string> latency;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%d,%.6f,%.6f", std::string(tier_name(r.tier)).c_str(),
                  r.concurrency, r.median_e2e_s, r.p95_e2e_s);
    latency.emplace_back(line);
  }
  const fs::path latency_path = out_dir / "latency_vs_concurrency.csv";
  write_lines(latency_path, "tier,c,median_s,p95_s", latency);

  // Effective throughput.
  std::vector<std::string> throughput;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%d,%.6f", std::string(tier_name(r.tier)).c_str(),
                  r.concurrency, r.req_per_min);
    throughput.emplace_back(line);
  }
  const fs::path throughput_path = out_dir / "throughput_vs_concurrency.csv";
  write_lines(throughput_path, "tier,c,req_per_min", throughput);

  // Cost efficiency.
  std::vector<std::string> efficiency;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%d,%.6f", std::string(tier_name(r.tier)).c_str(),
                  r.concurrency, r.conc_per_cent);
    efficiency.emplace_back(line);
  }
  const fs::path efficiency_path = out_dir / "efficiency_vs_concurrency.csv";
  write_lines(efficiency_path, "tier,c,conc_per_cent", efficiency);

  // Per-student semester cost across the enrollment scale points.
  std::vector<std::string> scale;
  const GsuScalingProfile profile;
  for (const auto& [enrollment, gsus] : profile.gsus_by_enrollment) {
    (void)gsus;
    const Money standard =
        per_student_semester_cost(TierKind::StandardShared, pricing, opts.queries,
                                  opts.input_tokens, opts.output_tokens, enrollment);
    const Money priority =
        per_student_semester_cost(TierKind::PriorityQueue, pricing, opts.queries,
                                  opts.input_tokens, opts.output_tokens, enrollment);
    const Money provisioned =
        per_student_semester_cost(TierKind::ReservedCapacity, pricing, opts.queries,
                                  opts.input_tokens, opts.output_tokens, enrollment, profile);
    std::snprintf(line, sizeof(line), "%lld,%.2f,%.2f,%.2f", static_cast<long long>(enrollment),
                  standard.usd(), priority.usd(), provisioned.usd());
    scale.emplace_back(line);
  }
  const fs::path scale_path = out_dir / "cost_vs_scale.csv";
  write_lines(scale_path, "enrollment,standard_usd,priority_usd,provisioned_usd", scale);

  manifest.add_output(latency_path);
  manifest.add_output(throughput_path);
  manifest.add_output(efficiency_path);
  manifest.add_output(scale_path);
  manifest.write(out_dir);

  if (want_json(opts.format)) {
    ordered_json out;
    out["out_dir"] = out_dir.string();
    out["files"] = {latency_path.filename().string(), throughput_path.filename().string(),
                    efficiency_path.filename().string(), scale_path.filename().string()};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "wrote 4 plot-data files and manifest.json to " << out_dir.string() << ":\n"
              << "  " << latency_path.filename().string() << '\n'
              << "  " << throughput_path.filename().string() << '\n'
              << "  " << efficiency_path.filename().string() << '\n'
              << "  " << scale_path.filename().string() << '\n';
  }
}

}  // namespace

void register_report(CLI::App& app) {
  auto opts = std::make_shared<ReportOptions>();
  auto* cmd = app.add_subcommand(
      "report", "Turn a summary CSV into tidy plot-data files (no image rendering)");
  cmd->add_option("--summary", opts->summary_file, "Summary CSV produced by sweep or analyze")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--pricing", opts->pricing_file, "Pricing table JSON overrides")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts->out_dir, "Output directory (created if missing)")->required();
  cmd->add_option("--queries", opts->queries, "Queries per student for the cost-vs-scale sheet")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--input-tokens", opts->input_tokens, "Input tokens per request")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--output-tokens", opts->output_tokens, "Output tokens per request")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_format_option(*cmd, opts->format);
  cmd->callback([opts] { run_report_cmd(*opts); });
}

}  // namespace parmax::tools

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <regex>
#include <string>
#include <vector>

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

struct AnalyzeOptions {
  std::string trace_dir;
  std::string corpus_file;
  std::string pricing_file;
  std::string out_dir;
  std::size_t warmup = 0;
  std::string format = "text";
};

struct CellInput {
  TierKind tier = TierKind::StandardShared;
  int level = 1;
  fs::path file;
};

std::vector<CellInput> scan_trace_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir.string());
  static const std::regex kCellName(R"((standard|priority|provisioned)_c([0-9]+)\.jsonl)");
  std::vector<CellInput> cells;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::smatch match;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, match, kCellName)) continue;
    CellInput cell;
    cell.tier = tier_from_name(match[1].str());
    cell.level = std::stoi(match[2].str());
    cell.file = entry.path();
    cells.push_back(std::move(cell));
  }
  std::sort(cells.begin(), cells.end(), [](const CellInput& a, const CellInput& b) {
    return std::make_pair(static_cast<int>(a.tier), a.level) <
           std::make_pair(static_cast<int>(b.tier), b.level);
  });
  return cells;
}

std::string crossover_text(const std::optional<std::pair<int, int>>& interval, bool computable) {
  if (!computable) return "n/a";
  if (!interval.has_value()) return "none";
  return "[" + std::to_string(interval->first) + ", " + std::to_string(interval->second) + "]";
}

void run_analyze_cmd(const AnalyzeOptions& opts) {
  ManifestBuilder manifest("analyze");

  const auto cells = scan_trace_dir(opts.trace_dir);
  if (cells.empty())
    throw ParseError("no trace files (<tier>_c<level>.jsonl) found in " + opts.trace_dir);

  CostBasis basis;
  if (!opts.pricing_file.empty()) basis.pricing = load_pricing(opts.pricing_file);
  if (opts.corpus_file.empty()) {
    const SynthTarget target;  // the generated-corpus token means
    basis.mean_input_tokens = target.mean_input_tokens;
    basis.mean_output_tokens = target.mean_output_tokens;
  } else {
    const CorpusStats stats = corpus_stats(load_corpus(opts.corpus_file));
    basis.mean_input_tokens = stats.mean_input_tokens;
    basis.mean_output_tokens = stats.mean_output_tokens;
  }

  std::vector<SweepResult> summary;
  std::vector<double> cell_inflation;
  for (const auto& cell : cells) {
    const auto traces = load_traces(cell.file);
    manifest.add_input(cell.file);
    const auto [begin, end] = steady_bounds(traces.size(), cell.level, opts.warmup);
    const std::vector<PipelineTrace> steady(traces.begin() + static_cast<std::ptrdiff_t>(begin),
                                            traces.begin() + static_cast<std::ptrdiff_t>(end));
    summary.push_back(aggregate(steady, cell.tier, cell.level, basis));
    cell_inflation.push_back(inflation(steady));
  }

  // Provisioned-vs-priority crossover needs both series on one grid.
  std::vector<SweepResult> provisioned, priority;
  for (const auto& row : summary) {
    if (row.tier == TierKind::ReservedCapacity) provisioned.push_back(row);
    if (row.tier == TierKind::PriorityQueue) priority.push_back(row);
  }
  bool crossover_computable = provisioned.size() == priority.size() && provisioned.size() >= 2;
  for (std::size_t i = 0; crossover_computable && i < provisioned.size(); ++i) {
    crossover_computable = provisioned[i].concurrency == priority[i].concurrency;
  }
  std::optional<std::pair<int, int>> crossover;
  if (crossover_computable) crossover = find_crossover(provisioned, priority);

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);

  const fs::path summary_path = out_dir / "summary.csv";
  write_summary_csv(summary, summary_path);

  const fs::path inflation_path = out_dir / "inflation.csv";
  {
    std::ofstream out(inflation_path, std::ios::binary);
    if (!out) throw RuntimeFailure("cannot open for writing: " + inflation_path.string());
    out << "tier,c,inflation\n";
    for (std::size_t i = 0; i < summary.size(); ++i) {
      char row[128];
      std::snprintf(row, sizeof(row), "%s,%d,%.6f", std::string(tier_name(summary[i].tier)).c_str(),
                    summary[i].concurrency, cell_inflation[i]);
      out << row << '\n';
    }
    if (!out) throw RuntimeFailure("failed writing " + inflation_path.string());
  }

  const fs::path crossover_path = out_dir / "crossover.txt";
  {
    std::ofstream out(crossover_path, std::ios::binary);
    if (!out) throw RuntimeFailure("cannot open for writing: " + crossover_path.string());
    out << "provisioned_vs_priority: " << crossover_text(crossover, crossover_computable) << '\n';
    if (!out) throw RuntimeFailure("failed writing " + crossover_path.string());
  }

  manifest.add_output(summary_path);
  manifest.add_output(inflation_path);
  manifest.add_output(crossover_path);
  if (!opts.corpus_file.empty()) manifest.add_input(opts.corpus_file);
  if (!opts.pricing_file.empty()) manifest.add_input(opts.pricing_file);
  manifest.write(out_dir);

  if (want_json(opts.format)) {
    ordered_json out;
    auto rows = ordered_json::array();
    for (std::size_t i = 0; i < summary.size(); ++i) {
      const auto& r = summary[i];
      ordered_json row;
      row["tier"] = std::string(tier_name(r.tier));
      row["c"] = r.concurrency;
      row["n"] = r.n_requests;
      row["errors"] = r.n_errors;
      row["median_s"] = r.median_e2e_s;
      row["p95_s"] = r.p95_e2e_s;
      row["req_per_min"] = r.req_per_min;
      row["success_rate"] = r.success_rate;
      row["inflation"] = cell_inflation[i];
      row["conc_per_cent"] = r.conc_per_cent;
      rows.push_back(std::move(row));
    }
    out["cells"] = std::move(rows);
    out["crossover"] = ordered_json::object();
    out["crossover"]["provisioned_vs_priority"] =
        crossover.has_value() ? ordered_json::array({crossover->first, crossover->second})
                              : ordered_json(nullptr);
    out["crossover"]["computable"] = crossover_computable;
    out["out_dir"] = out_dir.string();
    std::cout << out.dump(2) << '\n';
  } else {
    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %4s %6s %7s %9s %9s %9s %8s %10s", "tier", "c", "n",
                  "errors", "median_s", "p95_s", "req/min", "success", "inflation");
    std::cout << line << '\n';
    for (std::size_t i = 0; i < summary.size(); ++i) {
      const auto& r = summary[i];
      std::snprintf(line, sizeof(line), "%-12s %4d %6zu %7zu %9.3f %9.3f %9.1f %8.4f %10.4f",
                    std::string(tier_name(r.tier)).c_str(), r.concurrency, r.n_requests, r.n_errors,
                    r.median_e2e_s, r.p95_e2e_s, r.req_per_min, r.success_rate, cell_inflation[i]);
      std::cout << line << '\n';
    }
    std::cout << "crossover provisioned vs priority: "
              << crossover_text(crossover, crossover_computable) << '\n'
              << "wrote summary.csv, inflation.csv, crossover.txt and manifest.json to "
              << out_dir.string() << '\n';
  }
}

}  // namespace

void register_analyze(CLI::App& app) {
  auto opts = std::make_shared<AnalyzeOptions>();
  auto* cmd = app.add_subcommand(
      "analyze", "Aggregate recorded traces into summary, inflation, and crossover reports");
  cmd->add_option("--traces", opts->trace_dir, "Directory holding <tier>_c<level>.jsonl files")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--corpus", opts->corpus_file,
                  "Corpus JSONL the traces were produced from; sets the token means behind the"
                  " cost columns (defaults to the synthetic-corpus targets)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--pricing", opts->pricing_file, "Pricing table JSON overrides")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts->out_dir, "Output directory (created if missing)")->required();
  cmd->add_option("--warmup", opts->warmup,
                  "Leading requests per cell to exclude on top of the steady-state trim")
      ->capture_default_str();
  add_format_option(*cmd, opts->format);
  cmd->callback([opts] { run_analyze_cmd(*opts); });
}

}  // namespace parmax::tools

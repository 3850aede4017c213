#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "manifest.hpp"
#include "parmax/errors.hpp"
#include "parmax/tiers.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace parmax::tools {

namespace {

struct CalibrateOptions {
  std::string table_file;
  std::string out_dir;
  std::string format = "text";
};

struct FitRow {
  TierKind tier = TierKind::StandardShared;
  AgentRole role = AgentRole::Video;
  double median_s = 0.0;
  double p95_s = 0.0;
  LogNormalParams fitted;
};

// The observation table is CSV: tier,role,median_s,p95_s - one row per
// (tier, agent) pair that was measured.
std::vector<FitRow> load_table(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open for reading: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  if (line != "tier,role,median_s,p95_s")
    throw ParseError(file.string() + ": expected header 'tier,role,median_s,p95_s', got '" + line +
                     "'");
  std::vector<FitRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": expected 4 fields");
    try {
      FitRow row;
      row.tier = tier_from_name(fields[0]);
      row.role = role_from_name(fields[1]);
      row.median_s = std::stod(fields[2]);
      row.p95_s = std::stod(fields[3]);
      rows.push_back(row);
    } catch (const std::invalid_argument&) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": malformed numeric field");
    } catch (const ValidationError& e) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (rows.empty()) throw ParseError(file.string() + ": no observation rows");
  return rows;
}

void run_calibrate_cmd(const CalibrateOptions& opts) {
  ManifestBuilder manifest("calibrate");

  std::vector<FitRow> rows = load_table(opts.table_file);
  manifest.add_input(opts.table_file);

  // Fit each observed (median, p95); per tier the medians land per role and
  // the shared sigma is the mean of the per-role fits. Contention and
  // capacity parameters keep their bundled defaults - a quantile table says
  // nothing about load behavior.
  TierSet tiers = default_tier_models();
  std::map<TierKind, std::vector<double>> sigmas;
  for (auto& row : rows) {
    row.fitted = calibrate_lognormal(row.median_s, row.p95_s);
    tiers.by_kind(row.tier).base_median_s[row.role] = row.median_s;
    sigmas[row.tier].push_back(row.fitted.sigma);
  }
  for (const auto& [tier, values] : sigmas) {
    double sum = 0.0;
    for (double s : values) sum += s;
    tiers.by_kind(tier).sigma = sum / static_cast<double>(values.size());
  }

  const fs::path out_dir(opts.out_dir);
  fs::create_directories(out_dir);
  const fs::path tiers_path = out_dir / "tiers.json";
  write_tier_set(tiers, tiers_path);
  manifest.add_output(tiers_path);
  manifest.write(out_dir);

  if (want_json(opts.format)) {
    ordered_json out;
    auto fits = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json fit;
      fit["tier"] = std::string(tier_name(row.tier));
      fit["role"] = std::string(role_name(row.role));
      fit["median_s"] = row.median_s;
      fit["p95_s"] = row.p95_s;
      fit["mu"] = row.fitted.mu;
      fit["sigma"] = row.fitted.sigma;
      fits.push_back(std::move(fit));
    }
    out["fits"] = std::move(fits);
    auto tier_sigma = ordered_json::object();
    for (const auto& [tier, values] : sigmas) {
      (void)values;
      tier_sigma[std::string(tier_name(tier))] = tiers.by_kind(tier).sigma;
    }
    out["tier_sigma"] = std::move(tier_sigma);
    out["tiers_file"] = tiers_path.string();
    std::cout << out.dump(2) << '\n';
  } else {
    char line[160];
    for (const auto& row : rows) {
      std::snprintf(line, sizeof(line), "%-12s %-12s median %6.3fs p95 %6.3fs -> mu %.4f sigma %.4f",
                    std::string(tier_name(row.tier)).c_str(),
                    std::string(role_name(row.role)).c_str(), row.median_s, row.p95_s,
                    row.fitted.mu, row.fitted.sigma);
      std::cout << line << '\n';
    }
    std::cout << "wrote " << tiers_path.string() << " and manifest.json\n";
  }
}

}  // namespace

void register_calibrate(CLI::App& app) {
  auto opts = std::make_shared<CalibrateOptions>();
  auto* cmd = app.add_subcommand(
      "calibrate", "Fit tier models from an observed (median, p95) latency table");
  cmd->add_option("--table", opts->table_file,
                  "Observation CSV with columns tier,role,median_s,p95_s")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts->out_dir, "Output directory (created if missing)")->required();
  add_format_option(*cmd, opts->format);
  cmd->callback([opts] { run_calibrate_cmd(*opts); });
}

}  // namespace parmax::tools

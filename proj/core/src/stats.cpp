#include "parmax/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "parmax/errors.hpp"

namespace parmax {

double quantile_nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("quantile: empty sample");
  if (!(p > 0.0) || p > 1.0) throw ValidationError("quantile: p must be in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1];
}

namespace {

double median_of(std::vector<double> values) { return quantile_nearest_rank(std::move(values), 0.5); }

std::vector<const PipelineTrace*> successful(const std::vector<PipelineTrace>& traces) {
  std::vector<const PipelineTrace*> out;
  out.reserve(traces.size());
  for (const auto& t : traces) {
    if (t.success) out.push_back(&t);
  }
  return out;
}

}  // namespace

SweepResult aggregate(const std::vector<PipelineTrace>& steady_traces, TierKind tier,
                      int concurrency, const CostBasis& cost) {
  const auto ok = successful(steady_traces);
  if (ok.size() < 2) throw ValidationError("aggregate: need at least 2 successful traces");

  SweepResult r;
  r.tier = tier;
  r.concurrency = concurrency;
  r.n_requests = steady_traces.size();
  r.n_errors = steady_traces.size() - ok.size();
  r.success_rate =
      static_cast<double>(ok.size()) / static_cast<double>(steady_traces.size());

  std::vector<double> e2e;
  std::vector<double> parallel;
  e2e.reserve(ok.size());
  parallel.reserve(ok.size());
  for (const auto* t : ok) {
    e2e.push_back(t->e2e_s());
    parallel.push_back(t->parallel_s());
  }
  r.median_e2e_s = median_of(e2e);
  r.p95_e2e_s = quantile_nearest_rank(e2e, 0.95);
  r.mean_e2e_s = std::accumulate(e2e.begin(), e2e.end(), 0.0) / static_cast<double>(e2e.size());
  r.median_parallel_s = median_of(std::move(parallel));

  for (AgentRole role : kAllRoles) {
    std::vector<double> lat;
    lat.reserve(ok.size());
    for (const auto* t : ok) {
      auto it = t->agent_latency_s.find(role);
      if (it != t->agent_latency_s.end()) lat.push_back(it->second);
    }
    r.per_agent_median_s[role] = lat.empty() ? 0.0 : median_of(std::move(lat));
  }
  r.bottleneck_share = parmax::bottleneck_share(steady_traces);

  double first_t0 = ok.front()->t0, last_t5 = ok.front()->t5;
  for (const auto& t : steady_traces) {
    first_t0 = std::min(first_t0, t.t0);
    last_t5 = std::max(last_t5, t.t5);
  }
  const double makespan_s = last_t5 - first_t0;
  if (!(makespan_s > 0.0)) throw ValidationError("aggregate: non-positive makespan");
  r.req_per_min = static_cast<double>(ok.size()) * 60.0 / makespan_s;

  Money request_cost{};
  if (tier != TierKind::ReservedCapacity) {
    request_cost = per_request_cost(tier, cost.pricing, std::llround(cost.mean_input_tokens),
                                    std::llround(cost.mean_output_tokens));
  }
  r.conc_per_cent = parmax::conc_per_cent(tier, cost.pricing, static_cast<double>(concurrency),
                                          r.req_per_min, request_cost);
  return r;
}

double inflation(const std::vector<PipelineTrace>& traces) {
  const auto ok = successful(traces);
  if (ok.size() < 2) throw ValidationError("inflation: need at least 2 successful traces");

  std::vector<double> parallel;
  std::vector<double> pooled;
  parallel.reserve(ok.size());
  pooled.reserve(ok.size() * 3);
  for (const auto* t : ok) {
    parallel.push_back(t->parallel_s());
    for (AgentRole role : kParallelRoles) {
      auto it = t->agent_latency_s.find(role);
      if (it != t->agent_latency_s.end()) pooled.push_back(it->second);
    }
  }
  const double denom = median_of(std::move(pooled));
  if (!(denom > 0.0)) throw ValidationError("inflation: non-positive pooled median");
  return median_of(std::move(parallel)) / denom - 1.0;
}

double littles_law_ratio(double req_per_min, int concurrency, double mean_e2e_s) {
  if (!(mean_e2e_s > 0.0)) throw ValidationError("littles_law_ratio: non-positive mean latency");
  if (concurrency <= 0) throw ValidationError("littles_law_ratio: non-positive concurrency");
  return req_per_min / (60.0 * static_cast<double>(concurrency) / mean_e2e_s);
}

double littles_law_ratio(const SweepResult& result) {
  return littles_law_ratio(result.req_per_min, result.concurrency, result.mean_e2e_s);
}

std::optional<std::pair<int, int>> find_crossover(const std::vector<SweepResult>& tier_a,
                                                  const std::vector<SweepResult>& tier_b) {
  if (tier_a.size() != tier_b.size())
    throw ValidationError("find_crossover: series cover different grids");
  if (tier_a.size() < 2) throw ValidationError("find_crossover: need at least 2 levels");
  for (std::size_t i = 0; i < tier_a.size(); ++i) {
    if (tier_a[i].concurrency != tier_b[i].concurrency)
      throw ValidationError("find_crossover: series cover different grids");
  }
  auto sign_at = [&](std::size_t i) {
    const double d = tier_a[i].median_e2e_s - tier_b[i].median_e2e_s;
    return (d > 0.0) - (d < 0.0);
  };
  for (std::size_t i = 0; i + 1 < tier_a.size(); ++i) {
    const int s0 = sign_at(i), s1 = sign_at(i + 1);
    if (s0 * s1 <= 0 && !(s0 == 0 && s1 == 0))
      return std::make_pair(tier_a[i].concurrency, tier_a[i + 1].concurrency);
  }
  return std::nullopt;
}

const char* const kSummaryHeader =
    "tier,c,n,errors,median_s,p95_s,parallel_median_s,video_s,guidance_s,code_s,synth_s,"
    "req_per_min,success_rate,conc_per_cent";

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

double agent_median_or_zero(const SweepResult& row, AgentRole role) {
  auto it = row.per_agent_median_s.find(role);
  return it == row.per_agent_median_s.end() ? 0.0 : it->second;
}

}  // namespace

std::string summary_csv_row(const SweepResult& row) {
  std::ostringstream out;
  out << tier_name(row.tier) << ',' << row.concurrency << ',' << row.n_requests << ','
      << row.n_errors << ',' << fmt6(row.median_e2e_s) << ',' << fmt6(row.p95_e2e_s) << ','
      << fmt6(row.median_parallel_s) << ',' << fmt6(agent_median_or_zero(row, AgentRole::Video))
      << ',' << fmt6(agent_median_or_zero(row, AgentRole::Guidance)) << ','
      << fmt6(agent_median_or_zero(row, AgentRole::Code)) << ','
      << fmt6(agent_median_or_zero(row, AgentRole::Synthesizer)) << ',' << fmt6(row.req_per_min)
      << ',' << fmt6(row.success_rate) << ',' << fmt6(row.conc_per_cent);
  return out.str();
}

void write_summary_csv(const std::vector<SweepResult>& rows, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open for writing: " + file.string());
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) out << summary_csv_row(row) << '\n';
  if (!out) throw RuntimeFailure("failed writing " + file.string());
}

std::vector<SweepResult> load_summary_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open for reading: " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file.string() + ": empty file");
  if (line != kSummaryHeader)
    throw ParseError(file.string() + ": unexpected header: " + line);

  std::vector<SweepResult> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 14)
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": expected 14 fields, got " +
                       std::to_string(fields.size()));
    try {
      SweepResult r;
      r.tier = tier_from_name(fields[0]);
      r.concurrency = std::stoi(fields[1]);
      r.n_requests = static_cast<std::size_t>(std::stoull(fields[2]));
      r.n_errors = static_cast<std::size_t>(std::stoull(fields[3]));
      r.median_e2e_s = std::stod(fields[4]);
      r.p95_e2e_s = std::stod(fields[5]);
      r.median_parallel_s = std::stod(fields[6]);
      r.per_agent_median_s[AgentRole::Video] = std::stod(fields[7]);
      r.per_agent_median_s[AgentRole::Guidance] = std::stod(fields[8]);
      r.per_agent_median_s[AgentRole::Code] = std::stod(fields[9]);
      r.per_agent_median_s[AgentRole::Synthesizer] = std::stod(fields[10]);
      r.req_per_min = std::stod(fields[11]);
      r.success_rate = std::stod(fields[12]);
      r.conc_per_cent = std::stod(fields[13]);
      rows.push_back(std::move(r));
    } catch (const std::invalid_argument&) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": malformed numeric field");
    } catch (const std::out_of_range&) {
      throw ParseError(file.string() + ":" + std::to_string(line_no) + ": numeric field out of range");
    }
  }
  return rows;
}

}  // namespace parmax

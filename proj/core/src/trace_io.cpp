#include "parmax/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parmax/errors.hpp"

namespace parmax {

namespace {

using json = nlohmann::ordered_json;

std::string at_line(std::size_t line_no) {
  return line_no == 0 ? std::string{} : " at line " + std::to_string(line_no);
}

double time_field(const json& doc, const char* key, std::size_t line_no) {
  if (!doc.contains(key) || !doc.at(key).is_number())
    throw ParseError(std::string("trace: missing numeric field '") + key + "'" + at_line(line_no));
  return doc.at(key).get<double>();
}

}  // namespace

std::string trace_to_json(const PipelineTrace& trace) {
  json doc;
  doc["query_id"] = trace.query_id;
  doc["tier"] = std::string(tier_name(trace.tier));
  doc["t0"] = trace.t0;
  doc["t1"] = trace.t1;
  doc["t2"] = trace.t2;
  doc["t3"] = trace.t3;
  doc["t4"] = trace.t4;
  doc["t5"] = trace.t5;
  json latencies = json::object();
  for (AgentRole role : kAllRoles) {
    auto it = trace.agent_latency_s.find(role);
    if (it != trace.agent_latency_s.end()) latencies[std::string(role_name(role))] = it->second;
  }
  doc["agent_latency_s"] = std::move(latencies);
  doc["bottleneck"] = std::string(role_name(trace.bottleneck));
  doc["success"] = trace.success;
  if (trace.error_kind.has_value()) {
    doc["error_kind"] = std::string(error_kind_name(*trace.error_kind));
  } else {
    doc["error_kind"] = nullptr;
  }
  return doc.dump();
}

PipelineTrace trace_from_json(const std::string& line, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("trace: invalid JSON" + at_line(line_no) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("trace: expected a JSON object" + at_line(line_no));

  PipelineTrace trace;
  if (!doc.contains("query_id") || !doc.at("query_id").is_string())
    throw ParseError("trace: missing string field 'query_id'" + at_line(line_no));
  trace.query_id = doc.at("query_id").get<std::string>();
  if (!doc.contains("tier") || !doc.at("tier").is_string())
    throw ParseError("trace: missing string field 'tier'" + at_line(line_no));
  trace.tier = tier_from_name(doc.at("tier").get<std::string>());
  trace.t0 = time_field(doc, "t0", line_no);
  trace.t1 = time_field(doc, "t1", line_no);
  trace.t2 = time_field(doc, "t2", line_no);
  trace.t3 = time_field(doc, "t3", line_no);
  trace.t4 = time_field(doc, "t4", line_no);
  trace.t5 = time_field(doc, "t5", line_no);

  if (!doc.contains("agent_latency_s") || !doc.at("agent_latency_s").is_object())
    throw ParseError("trace: missing object field 'agent_latency_s'" + at_line(line_no));
  for (const auto& [key, value] : doc.at("agent_latency_s").items()) {
    if (!value.is_number())
      throw ParseError("trace: agent latency for '" + key + "' must be a number" + at_line(line_no));
    trace.agent_latency_s[role_from_name(key)] = value.get<double>();
  }

  if (!doc.contains("bottleneck") || !doc.at("bottleneck").is_string())
    throw ParseError("trace: missing string field 'bottleneck'" + at_line(line_no));
  trace.bottleneck = role_from_name(doc.at("bottleneck").get<std::string>());
  if (!doc.contains("success") || !doc.at("success").is_boolean())
    throw ParseError("trace: missing boolean field 'success'" + at_line(line_no));
  trace.success = doc.at("success").get<bool>();
  if (!doc.contains("error_kind"))
    throw ParseError("trace: missing field 'error_kind'" + at_line(line_no));
  if (!doc.at("error_kind").is_null()) {
    if (!doc.at("error_kind").is_string())
      throw ParseError("trace: 'error_kind' must be a string or null" + at_line(line_no));
    trace.error_kind = error_kind_from_name(doc.at("error_kind").get<std::string>());
  }

  const double ts[] = {trace.t0, trace.t1, trace.t2, trace.t3, trace.t4, trace.t5};
  for (int i = 1; i < 6; ++i) {
    if (ts[i] < ts[i - 1])
      throw ValidationError("trace: timestamps must be non-decreasing" + at_line(line_no));
  }
  if (trace.success == trace.error_kind.has_value())
    throw ValidationError("trace: success flag and error_kind disagree" + at_line(line_no));
  return trace;
}

void write_traces(const std::vector<PipelineTrace>& traces, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open for writing: " + file.string());
  for (const auto& trace : traces) out << trace_to_json(trace) << '\n';
  if (!out) throw RuntimeFailure("failed writing " + file.string());
}

std::vector<PipelineTrace> load_traces(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open for reading: " + file.string());
  std::vector<PipelineTrace> traces;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    traces.push_back(trace_from_json(line, line_no));
  }
  return traces;
}

std::string cell_file_name(TierKind tier, int level) {
  std::ostringstream name;
  name << tier_name(tier) << "_c" << level << ".jsonl";
  return name.str();
}

std::unique_ptr<ReplayBackend> make_replay_backend(const std::vector<PipelineTrace>& traces) {
  auto backend = std::make_unique<ReplayBackend>();
  for (const auto& trace : traces) {
    for (const auto& [role, latency] : trace.agent_latency_s) {
      backend->add(trace.query_id, role, latency);
    }
  }
  return backend;
}

}  // namespace parmax

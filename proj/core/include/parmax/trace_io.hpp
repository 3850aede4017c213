#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "parmax/backend.hpp"
#include "parmax/pipeline.hpp"

namespace parmax {

// Trace files are JSON Lines, one PipelineTrace per line, all fields present
// (error_kind null on success), timestamps in seconds at microsecond-or-finer
// resolution. Serialization is deterministic: fixed key order, shortest
// round-trip numbers.
std::string trace_to_json(const PipelineTrace& trace);
PipelineTrace trace_from_json(const std::string& line, std::size_t line_no = 0);

void write_traces(const std::vector<PipelineTrace>& traces, const std::filesystem::path& file);
std::vector<PipelineTrace> load_traces(const std::filesystem::path& file);

// Canonical per-cell trace file name: {tier}_c{level}.jsonl
std::string cell_file_name(TierKind tier, int level);

// Loads every recorded latency of a trace set into a replay backend.
std::unique_ptr<ReplayBackend> make_replay_backend(const std::vector<PipelineTrace>& traces);

}  // namespace parmax

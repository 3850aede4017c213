#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "parmax/roles.hpp"

namespace parmax {

// One tutoring query: per-agent token counts, plus optional prompt text kept
// only for live-endpoint replay. Token counts are what the simulator and the
// cost model consume.
struct QueryRecord {
  std::string id;
  RoleMap<std::int64_t> input_tokens;
  RoleMap<std::int64_t> output_tokens;
  RoleMap<std::string> text;  // empty strings when absent
  bool has_text = false;

  std::int64_t total_input() const;
  std::int64_t total_output() const;
};

using Corpus = std::vector<QueryRecord>;

struct CorpusStats {
  std::size_t n_records = 0;
  double mean_input_tokens = 0.0;
  double mean_output_tokens = 0.0;
  double mean_total_tokens = 0.0;
};

// How a query's total tokens are split across agents. Fractions must sum to 1
// within 1e-9. The default input split reflects the video agent carrying the
// transcript context while the synthesizer sees only a short instruction.
struct AllocationProfile {
  RoleMap<double> share;
  void validate() const;  // throws ValidationError
};

AllocationProfile default_input_allocation();   // video .55 / guidance .20 / code .15 / synth .10
AllocationProfile default_output_allocation();  // uniform quarter each

// Targets for synthetic corpus generation. `spread` is the coefficient of
// variation of the per-record log-normal totals; 0 collapses every record to
// the rounded target means.
struct SynthTarget {
  double mean_input_tokens = 6671.0;
  double mean_output_tokens = 767.0;
  double spread = 0.3;
};

// JSON Lines I/O. One record per line:
//   {"id": "...", "input_tokens": {"video": n, "code": n, "guidance": n,
//    "synthesizer": n}, "output_tokens": {...}, "text": {...}?}
// Malformed lines raise ParseError naming the line number; duplicate ids
// raise ValidationError citing the offending line.
Corpus load_corpus(const std::filesystem::path& file);
Corpus load_corpus(std::istream& in, const std::string& name);
void write_corpus(const Corpus& corpus, const std::filesystem::path& file);
void write_corpus(const Corpus& corpus, std::ostream& out);

CorpusStats corpus_stats(const Corpus& corpus);  // throws ValidationError when empty

// Deterministic synthetic corpus: per-record totals are log-normal draws
// (truncated at one token), split across agents by the allocation profiles.
Corpus synth_corpus(std::size_t count, const SynthTarget& target, std::uint64_t seed,
                    const AllocationProfile& input_alloc = default_input_allocation(),
                    const AllocationProfile& output_alloc = default_output_allocation());

}  // namespace parmax

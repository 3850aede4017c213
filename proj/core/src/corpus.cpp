#include "parmax/corpus.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "parmax/errors.hpp"
#include "parmax/rng.hpp"

namespace parmax {

using nlohmann::ordered_json;

std::int64_t QueryRecord::total_input() const {
  std::int64_t sum = 0;
  for (AgentRole r : kAllRoles) sum += input_tokens[r];
  return sum;
}

std::int64_t QueryRecord::total_output() const {
  std::int64_t sum = 0;
  for (AgentRole r : kAllRoles) sum += output_tokens[r];
  return sum;
}

void AllocationProfile::validate() const {
  double sum = 0.0;
  for (AgentRole r : kAllRoles) {
    if (share[r] < 0.0) throw ValidationError("allocation shares must be non-negative");
    sum += share[r];
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ValidationError("allocation shares must sum to 1 (got " + std::to_string(sum) + ")");
}

AllocationProfile default_input_allocation() {
  AllocationProfile p;
  p.share[AgentRole::Video] = 0.55;
  p.share[AgentRole::Guidance] = 0.20;
  p.share[AgentRole::Code] = 0.15;
  p.share[AgentRole::Synthesizer] = 0.10;
  return p;
}

AllocationProfile default_output_allocation() {
  AllocationProfile p;
  for (AgentRole r : kAllRoles) p.share[r] = 0.25;
  return p;
}

namespace {

RoleMap<std::int64_t> parse_token_map(const ordered_json& obj, const std::string& field,
                                      std::size_t line_no) {
  const auto ctx = [&] { return field + " on line " + std::to_string(line_no); };
  if (!obj.contains(field)) throw ParseError("missing field " + ctx());
  const auto& node = obj.at(field);
  if (!node.is_object()) throw ParseError(ctx() + " must be an object");
  RoleMap<std::int64_t> tokens;
  for (AgentRole r : kAllRoles) {
    const std::string key(role_name(r));
    if (!node.contains(key)) throw ParseError("missing role '" + key + "' in " + ctx());
    const auto& v = node.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw ParseError("role '" + key + "' in " + ctx() + " must be a non-negative integer");
    tokens[r] = v.get<std::int64_t>();
  }
  return tokens;
}

QueryRecord parse_record(const std::string& line, std::size_t line_no) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
  }
  if (!obj.is_object())
    throw ParseError("line " + std::to_string(line_no) + ": record must be a JSON object");
  QueryRecord rec;
  if (!obj.contains("id") || !obj.at("id").is_string())
    throw ParseError("line " + std::to_string(line_no) + ": missing string field 'id'");
  rec.id = obj.at("id").get<std::string>();
  if (rec.id.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty id");
  rec.input_tokens = parse_token_map(obj, "input_tokens", line_no);
  rec.output_tokens = parse_token_map(obj, "output_tokens", line_no);
  if (obj.contains("text")) {
    const auto& t = obj.at("text");
    if (!t.is_object())
      throw ParseError("line " + std::to_string(line_no) + ": 'text' must be an object");
    rec.has_text = true;
    for (AgentRole r : kAllRoles) {
      const std::string key(role_name(r));
      if (t.contains(key)) rec.text[r] = t.at(key).get<std::string>();
    }
  }
  return rec;
}

}  // namespace

Corpus load_corpus(std::istream& in, const std::string& name) {
  Corpus corpus;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    QueryRecord rec = parse_record(line, line_no);
    if (!seen.insert(rec.id).second)
      throw ValidationError(name + ": duplicate id '" + rec.id + "' on line " +
                            std::to_string(line_no));
    corpus.push_back(std::move(rec));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open corpus file: " + file.string());
  return load_corpus(in, file.string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const QueryRecord& rec : corpus) {
    ordered_json obj;
    obj["id"] = rec.id;
    for (const char* field : {"input_tokens", "output_tokens"}) {
      ordered_json tokens;
      const auto& map =
          std::string_view(field) == "input_tokens" ? rec.input_tokens : rec.output_tokens;
      for (AgentRole r : kAllRoles) tokens[std::string(role_name(r))] = map[r];
      obj[field] = std::move(tokens);
    }
    if (rec.has_text) {
      ordered_json text;
      for (AgentRole r : kAllRoles) {
        if (!rec.text[r].empty()) text[std::string(role_name(r))] = rec.text[r];
      }
      obj["text"] = std::move(text);
    }
    out << obj.dump() << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw RuntimeFailure("cannot write corpus file: " + file.string());
  write_corpus(corpus, out);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.empty()) throw ValidationError("corpus_stats requires a non-empty corpus");
  CorpusStats stats;
  stats.n_records = corpus.size();
  long double in_sum = 0, out_sum = 0;
  for (const QueryRecord& rec : corpus) {
    in_sum += static_cast<long double>(rec.total_input());
    out_sum += static_cast<long double>(rec.total_output());
  }
  stats.mean_input_tokens = static_cast<double>(in_sum / corpus.size());
  stats.mean_output_tokens = static_cast<double>(out_sum / corpus.size());
  stats.mean_total_tokens = stats.mean_input_tokens + stats.mean_output_tokens;
  return stats;
}

namespace {

RoleMap<std::int64_t> split_tokens(double total, const AllocationProfile& alloc) {
  RoleMap<std::int64_t> tokens;
  for (AgentRole r : kAllRoles)
    tokens[r] = static_cast<std::int64_t>(std::llround(total * alloc.share[r]));
  return tokens;
}

}  // namespace

Corpus synth_corpus(std::size_t count, const SynthTarget& target, std::uint64_t seed,
                    const AllocationProfile& input_alloc, const AllocationProfile& output_alloc) {
  input_alloc.validate();
  output_alloc.validate();
  if (target.mean_input_tokens < 1 || target.mean_output_tokens < 1)
    throw ValidationError("synthetic corpus target means must be at least 1 token");
  if (target.spread < 0) throw ValidationError("synthetic corpus spread must be non-negative");

  // Log-normal matching the requested mean and coefficient of variation:
  // sigma^2 = ln(1 + cv^2), mu = ln(mean) - sigma^2 / 2.
  const double sigma2 = std::log1p(target.spread * target.spread);
  const double sigma = std::sqrt(sigma2);
  const double mu_in = std::log(target.mean_input_tokens) - 0.5 * sigma2;
  const double mu_out = std::log(target.mean_output_tokens) - 0.5 * sigma2;

  Rng rng(derive_seed(seed, "synth-corpus"));
  Corpus corpus;
  corpus.reserve(count);
  char id[32];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(id, sizeof id, "q%05zu", i + 1);
    QueryRecord rec;
    rec.id = id;
    const double total_in = target.spread == 0.0 ? target.mean_input_tokens
                                                 : std::max(1.0, rng.lognormal(mu_in, sigma));
    const double total_out = target.spread == 0.0 ? target.mean_output_tokens
                                                  : std::max(1.0, rng.lognormal(mu_out, sigma));
    rec.input_tokens = split_tokens(total_in, input_alloc);
    rec.output_tokens = split_tokens(total_out, output_alloc);
    corpus.push_back(std::move(rec));
  }
  return corpus;
}

}  // namespace parmax

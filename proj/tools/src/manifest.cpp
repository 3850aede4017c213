#include "manifest.hpp"

#include <fstream>

#include "commands.hpp"
#include "digest.hpp"
#include "parmax/errors.hpp"

namespace parmax::tools {

ManifestBuilder::ManifestBuilder(std::string command)
    : command_(std::move(command)), started_(std::chrono::steady_clock::now()) {}

void ManifestBuilder::add_input(const std::filesystem::path& file) {
  inputs_[file.string()] = sha256_hex(file);
}

void ManifestBuilder::add_output(const std::filesystem::path& file) {
  nlohmann::ordered_json entry;
  entry["file"] = file.filename().string();
  entry["sha256"] = sha256_hex(file);
  outputs_.push_back(std::move(entry));
}

std::filesystem::path ManifestBuilder::write(const std::filesystem::path& out_dir) {
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_);
  nlohmann::ordered_json doc;
  doc["tool_version"] = PARMAX_VERSION_STR;
  doc["command"] = command_;
  for (auto& [key, value] : extra_.items()) doc[key] = value;
  doc["inputs"] = inputs_;
  doc["outputs"] = outputs_;
  doc["wall_time_s"] = elapsed.count();

  const auto path = out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw RuntimeFailure("failed writing " + path.string());
  return path;
}

}  // namespace parmax::tools

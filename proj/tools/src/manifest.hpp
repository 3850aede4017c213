#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace parmax::tools {

// Reproducibility record written next to a command's outputs: tool version,
// the exact inputs and outputs with content digests, and wall time. Two runs
// with identical inputs and seeds produce identical digest lists.
class ManifestBuilder {
 public:
  explicit ManifestBuilder(std::string command);

  void add_input(const std::filesystem::path& file);
  void add_output(const std::filesystem::path& file);

  // Free-form command-specific fields (plan echo, seeds, ...).
  nlohmann::ordered_json& extra() { return extra_; }

  // Writes <out_dir>/manifest.json and returns its path.
  std::filesystem::path write(const std::filesystem::path& out_dir);

 private:
  std::string command_;
  std::chrono::steady_clock::time_point started_;
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json extra_ = nlohmann::ordered_json::object();
};

}  // namespace parmax::tools

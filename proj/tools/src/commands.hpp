#pragma once

#include <string>

#include <CLI11.hpp>

#ifndef PARMAX_VERSION_STR
#define PARMAX_VERSION_STR "0.0.0"
#endif

namespace parmax::tools {

// Each register_* wires one subcommand into the app. Command callbacks signal
// failure by throwing: ParseError/ValidationError mean bad input or flags
// (exit 1), anything else is a runtime failure (exit 2); main() does the
// mapping.
void register_sweep(CLI::App& app);
void register_analyze(CLI::App& app);
void register_cost(CLI::App& app);
void register_recommend(CLI::App& app);
void register_report(CLI::App& app);
void register_calibrate(CLI::App& app);

// Shared --format flag; every subcommand offers text (human) and json
// (machine) renderings of its stdout summary.
inline void add_format_option(CLI::App& cmd, std::string& format) {
  cmd.add_option("--format", format, "Output format for the command summary")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

inline bool want_json(const std::string& format) { return format == "json"; }

}  // namespace parmax::tools

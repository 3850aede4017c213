#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

namespace parmax::tools {

// Hex-encoded SHA-256, used for the manifest's input/output digests.
std::string sha256_hex_bytes(const void* data, std::size_t len);
std::string sha256_hex(const std::filesystem::path& file);

}  // namespace parmax::tools

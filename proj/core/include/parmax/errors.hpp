#pragma once

#include <stdexcept>
#include <string>

namespace parmax {

// Malformed input data (bad JSON, unreadable file, wrong column set).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a documented precondition
// (duplicate ids, unknown tier names, out-of-range parameters).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures that arise while executing an otherwise valid request
// (backend exhaustion, I/O errors mid-run).
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace parmax

#pragma once

#include <stdexcept>
#include <string>

namespace dtwlvq {

/// Malformed arguments: dimension mismatches, empty inputs, bad parameters.
class input_error : public std::invalid_argument {
public:
  explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A warping path violating boundary, step or range constraints.
class path_error : public std::invalid_argument {
public:
  explicit path_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Request exceeding a hard enumeration limit.
class size_error : public std::invalid_argument {
public:
  explicit size_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Structurally unusable model state (empty codebook, missing class prototype).
class model_error : public std::runtime_error {
public:
  explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid experiment or training configuration.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable or malformed input files; messages carry line context.
class parse_error : public std::runtime_error {
public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A statistic whose defining expression is undefined for the given data.
class computation_error : public std::runtime_error {
public:
  explicit computation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Result tables that cannot be joined.
class merge_error : public std::runtime_error {
public:
  explicit merge_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dtwlvq

#pragma once

#include <stdexcept>
#include <string>

namespace reseval {

// Caller violated an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Input is well-formed but uses a property this toolkit does not support
// (sample rate, channel count, encoding, unknown field).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace reseval

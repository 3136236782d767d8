#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sheafbar {

// A well-formed request that has no answer in the mathematical domain
// (violated precondition, incompatible inputs, budget overrun).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based; 0 means "not tied to a line".
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Missing file or unreadable stream.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sheafbar

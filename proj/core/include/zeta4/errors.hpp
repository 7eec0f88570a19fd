#pragma once

#include <stdexcept>
#include <string>

namespace zeta4 {

enum class ErrorKind {
  Domain,
  Precision,
  Budget,
  Geometry,
  Conditioning,
  Coverage,
  NoBracket,
  Range,
  Convention,
  MissedZero,
};

const char* to_string(ErrorKind kind) noexcept;

// Base for every failure raised by the library. The kind drives the CLI exit
// status. Some kinds attach a number: the best reachable error bound for
// Precision, the partial sum for Budget, the condition number for
// Conditioning.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double payload = 0.0)
      : std::runtime_error(what), kind_(kind), payload_(payload) {}

  ErrorKind kind() const noexcept { return kind_; }
  double payload() const noexcept { return payload_; }

 private:
  ErrorKind kind_;
  double payload_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what, double payload = 0.0) {
  throw Error(kind, what, payload);
}

}  // namespace zeta4

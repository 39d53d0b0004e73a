#pragma once

#include <stdexcept>
#include <string>

namespace spantrace {

/// Raised for contract violations: shape/ring/carrier mismatches, malformed
/// input, non-commuting diagrams.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file errors carry a JSON-pointer-style location.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location + ": " + what), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// Result of a validation pass. Empty detail means ok.
struct Verdict {
  bool ok = true;
  std::string detail;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }

  explicit operator bool() const noexcept { return ok; }
};

}  // namespace spantrace

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spantrace/instance.hpp"

namespace spantrace {

/// Printable class: carrier labels and one value per label.
struct ClassDump {
  std::vector<std::string> carrier;
  std::vector<Scalar> values;

  static ClassDump of(const OmegaClass& c);
  friend bool operator==(const ClassDump&, const ClassDump&) = default;
};

struct CheckResult {
  std::size_t instance = 0;
  std::string name;
  bool pass = true;
  std::string detail;
  std::optional<ClassDump> lhs, rhs;  // both sides when a class comparison fails
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  GenParams params;
  std::optional<std::int64_t> modulus;  // none: alternating Z, Z/7
  std::vector<CheckResult> checks;      // sorted by instance, then name
  double elapsed_ms = 0;

  std::size_t failed() const;
  bool passed() const { return failed() == 0; }
};

struct SuiteFlags {
  std::string suite = "all";
  std::uint64_t seed = 0;
  std::size_t count = 1;
  GenParams params;
  std::optional<std::int64_t> modulus;
  bool serial = false;
};

/// lv, global, triangle, symmetry, basechange, oracle, all.
const std::vector<std::string>& suite_names();
bool known_suite(const std::string& name);

/// Parameters of instance `index` of a run: the modulus alternates when
/// none is given, and the global suite uses a one-point base.
GenParams instance_params(const SuiteFlags& flags, std::size_t index);

/// Checks of one suite on one instance. Never throws: library errors become
/// failing checks.
std::vector<CheckResult> run_checks(const std::string& suite, const Instance& inst, std::size_t index = 0);

/// Generates count instances and checks them, in parallel unless serial is
/// set. Throws Error on an unknown suite or bad parameters.
Report run_suite(const SuiteFlags& flags);

/// Every check that applies to a parsed file.
Report check_file(const Instance& inst);

/// json: one line, stable key order, newline terminated. text: one line per check.
std::string emit_report(const Report& r, const std::string& format);
/// Inverse of the json form of emit_report. Throws ParseError.
Report parse_report(const std::string& text);

/// Traces of endomorphisms, pairings of opposite pairs and characteristic
/// classes of the sheaves in a file, as json.
std::string emit_traces(const Instance& inst);

}  // namespace spantrace

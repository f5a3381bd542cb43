#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geospec {

// Failure categories raised by parsing, indicator math, and rendering.
enum class errc {
  zero_region_output,
  degenerate_reference,
  inconsistent_counts,
  out_of_domain,
  undefined_impact,
  malformed_row,
  duplicate_key,
  bad_nuts_code,
  nesting_violation,
  missing_level,
  empty_input,
  bad_geometry,
  key_missing,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_region_output: return "ZeroRegionOutput";
    case errc::degenerate_reference: return "DegenerateReference";
    case errc::inconsistent_counts: return "InconsistentCounts";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::undefined_impact: return "UndefinedImpact";
    case errc::malformed_row: return "MalformedRow";
    case errc::duplicate_key: return "DuplicateKey";
    case errc::bad_nuts_code: return "BadNutsCode";
    case errc::nesting_violation: return "NestingViolation";
    case errc::missing_level: return "MissingLevel";
    case errc::empty_input: return "EmptyInput";
    case errc::bad_geometry: return "BadGeometry";
    case errc::key_missing: return "KeyMissing";
  }
  return "Unknown";
}

// Carries the rule that was violated plus, for tabular inputs, the 1-based
// line where the offending record starts (0 when not tied to a line).
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& detail, std::size_t line = 0)
      : std::runtime_error(compose(code, detail, line)), code_(code), line_(line) {}

  errc code() const { return code_; }
  std::size_t line() const { return line_; }

 private:
  static std::string compose(errc code, const std::string& detail, std::size_t line) {
    std::string msg;
    if (line > 0) {
      msg += "line ";
      msg += std::to_string(line);
      msg += ": ";
    }
    msg += errc_name(code);
    msg += ": ";
    msg += detail;
    return msg;
  }

  errc code_;
  std::size_t line_;
};

}  // namespace geospec

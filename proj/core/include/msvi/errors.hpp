#pragma once

#include <stdexcept>
#include <string>

namespace msvi {

/// Dimension or space mismatch between otherwise valid objects.
struct ShapeError : std::invalid_argument {
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A construction invariant does not hold for the given data.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A problem file violates the schema; the message names the offending field.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime inequality the solver is expected to maintain failed; the
/// message names the violated inequality.
struct TheoryViolation : std::runtime_error {
  explicit TheoryViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace msvi

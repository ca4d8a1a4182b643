#pragma once

#include <stdexcept>
#include <string>

namespace bfcausal {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct CyclicGraphError : Error {
  using Error::Error;
};
struct UnknownVariableError : Error {
  using Error::Error;
};
struct ConflictingOrientationError : Error {
  using Error::Error;
};
struct NegativeIndexError : Error {
  using Error::Error;
};
struct ConstantColumnError : Error {
  using Error::Error;
};
struct DegenerateCategoryError : Error {
  using Error::Error;
};
struct DegenerateVariableError : Error {
  using Error::Error;
};
struct SingularSystemError : Error {
  using Error::Error;
};
struct InvalidDofError : Error {
  using Error::Error;
};
struct TooManyEdgesError : Error {
  using Error::Error;
};
struct InvalidShapeError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct RaggedRowsError : Error {
  using Error::Error;
};
struct MissingValuesError : Error {
  using Error::Error;
};
struct DuplicateTierMembershipError : Error {
  using Error::Error;
};
struct VariableMismatchError : Error {
  using Error::Error;
};
struct TimeoutExceededError : Error {
  using Error::Error;
};
struct InvalidConfigError : Error {
  using Error::Error;
};

}  // namespace bfcausal

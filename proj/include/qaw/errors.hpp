#pragma once

#include <stdexcept>
#include <string>

namespace qaw {

/// Base class for all workbench errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class SingularMapError : public Error {
 public:
  explicit SingularMapError(const std::string& what) : Error(what) {}
};

/// A required sequence or window was too short and could not be extended.
class TruncatedError : public Error {
 public:
  explicit TruncatedError(const std::string& what) : Error(what) {}
};

/// A weight required to be rapidly decreasing has an infinite moment.
class NotRapidlyDecreasingError : public Error {
 public:
  explicit NotRapidlyDecreasingError(const std::string& what) : Error(what) {}
};

/// Symbolic and definite numeric classifications disagree. This signals an
/// implementation bug and is never swallowed.
class ContradictionError : public Error {
 public:
  explicit ContradictionError(const std::string& what) : Error(what) {}
};

}  // namespace qaw

#pragma once

#include <stdexcept>
#include <string>

namespace proxflow {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed group structure. `kind()` says which invariant failed.
class GroupError : public Error {
 public:
  enum class Kind { kEmptyGroup, kNonpositiveWeight, kIndexOutOfRange, kDuplicateIndex, kNoGroups, kInvalidLength };

  GroupError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidWarmStart : public Error {
 public:
  using Error::Error;
};

/// The flow handed to min-cut extraction still has an augmenting path.
class NotMaximal : public Error {
 public:
  using Error::Error;
};

/// A divide-and-conquer step produced an empty side or exceeded its split
/// budget. Signals a tolerance bug; never expected on valid input.
class TerminationError : public Error {
 public:
  using Error::Error;
};

class ToleranceNotReached : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace proxflow

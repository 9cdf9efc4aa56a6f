#pragma once

#include <stdexcept>
#include <string>

namespace toa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain on which a representation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class IncompatibleStates : public Error {
 public:
  using Error::Error;
};

/// A reduction kernel with weight on the wrong side of p = 0.
class SectorViolation : public Error {
 public:
  using Error::Error;
};

/// A map with no meaning for the requested input (e.g. classical arrival at the origin).
class UndefinedMap : public Error {
 public:
  using Error::Error;
};

class UndefinedMoments : public Error {
 public:
  using Error::Error;
};

/// A sampling grid too coarse for the phase it has to follow. `guard()` names
/// the check that tripped so callers can report it.
class ResolutionError : public Error {
 public:
  ResolutionError(std::string guard, const std::string& what)
      : Error(what), guard_(std::move(guard)) {}

  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

}  // namespace toa

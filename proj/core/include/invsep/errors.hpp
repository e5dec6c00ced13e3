#pragma once

#include <stdexcept>
#include <string>

namespace invsep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log() was asked for an element on the branch cut (theta = +-pi).
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Landmark geometry too degenerate for the observer gain.
class GeometryError : public Error {
 public:
  GeometryError(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// An integration produced non-finite or runaway values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Tracking controller requested around a reference at rest (u_r = 0).
class DegenerateReferenceError : public Error {
 public:
  using Error::Error;
};

/// Configuration document failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace invsep

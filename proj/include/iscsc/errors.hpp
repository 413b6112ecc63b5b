#pragma once

#include <stdexcept>
#include <string>

namespace iscsc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs outside an operation's domain (non-PSD covariance, bad dimensions, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Ill-conditioned or non-finite numerics.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A vehicle reached the RSU projection point (d <= 0) during state evolution.
class StateError : public Error {
 public:
  using Error::Error;
};

class TrajectoryError : public StateError {
 public:
  TrajectoryError(int slot, const std::string& what)
      : StateError("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
  int slot() const { return slot_; }

 private:
  int slot_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace iscsc

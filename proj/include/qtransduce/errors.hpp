#pragma once

#include <stdexcept>
#include <string>

namespace qtr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inadmissible model / run configuration.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Model file could not be parsed.
class ParseError : public ConfigurationError {
 public:
  using ConfigurationError::ConfigurationError;
};

/// Argument outside the domain of a formula (negative frequency, bad probability, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The assembled dynamical matrix has an eigenvalue with positive real part.
class UnstableModelError : public Error {
 public:
  using Error::Error;
};

/// (iΩ + M) is numerically singular at the requested sideband frequency.
class NearSingularError : public Error {
 public:
  NearSingularError(double omega, double condition)
      : Error("near-singular dynamics at omega = " + std::to_string(omega) +
              " rad/s (condition estimate " + std::to_string(condition) + ")"),
        omega_(omega),
        condition_(condition) {}
  double omega() const noexcept { return omega_; }
  double condition() const noexcept { return condition_; }

 private:
  double omega_;
  double condition_;
};

/// Added noise requested where the signal efficiency vanishes.
class UndefinedNoiseError : public Error {
 public:
  using Error::Error;
};

/// The LO phase cancels the signal transfer function (|t| = 0).
class SignalNulledError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not converge under grid doubling.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A heralding protocol produced no heralded events.
class NoHeraldError : public Error {
 public:
  explicit NoHeraldError(const std::string& what, long long heralds = 0)
      : Error(what), heralds_(heralds) {}
  long long heralds() const noexcept { return heralds_; }

 private:
  long long heralds_;
};

/// An optimizer spent its budget without one feasible evaluation.
class NoFeasiblePointError : public Error {
 public:
  using Error::Error;
};

/// A closed form evaluated exactly on an undamped pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtr

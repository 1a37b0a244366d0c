#pragma once

#include <stdexcept>
#include <string>

namespace schurnorm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The line -nu0 + iR meets the spectrum (or comes too close): the
// transfer kernel's denominator vanishes.
class DegenerateDenominator : public Error {
 public:
  DegenerateDenominator(const std::string& what, double nu0, double omega)
      : Error(what), nu0_(nu0), omega_(omega) {}
  double nu0() const { return nu0_; }
  double omega() const { return omega_; }

 private:
  double nu0_;
  double omega_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class BadGridSize : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(const std::string& column)
      : Error("missing column: " + column), column_(column) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

}  // namespace schurnorm

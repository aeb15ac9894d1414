#pragma once

#include <stdexcept>
#include <string>

namespace steercert {

// Base class for every error raised by the library. The C API maps each
// subclass onto one sc_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An operator or assemblage fails one of its structural invariants
// (PSD, normalisation, no-signalling, completeness).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Factorisation failure inside the interior-point solver.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class UnsupportedLevel : public Error {
 public:
  using Error::Error;
};

// The solver could not certify either way.
class SolverUnknown : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace steercert

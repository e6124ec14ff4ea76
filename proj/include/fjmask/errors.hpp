#ifndef FJMASK_ERRORS_HPP
#define FJMASK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fjmask {

// Invalid user-supplied parameter (CLI exit code 2).
class ParameterError : public std::runtime_error {
 public:
  explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: instability, insufficient excitation, singularity
// (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class InsufficientExcitationError : public NumericalError {
 public:
  explicit InsufficientExcitationError(const std::string& msg)
      : NumericalError(msg) {}
};

// File / serialization failure (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fjmask

#endif

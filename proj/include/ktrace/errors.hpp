#pragma once

#include <stdexcept>
#include <string>

namespace ktrace {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed call: bad dimensions, out-of-range k, invalid flag values.
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(what) {}
};

// Input violates a mathematical precondition (not PD where PD is required,
// probabilities that do not sum to one, non-Hermitian data past tolerance).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A documented budget was exceeded (combinatorial sizes, joint support).
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what) {}
};

// Unreadable or inconsistent configuration / input files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Numerical routine failed to converge or lost all accuracy.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

}  // namespace ktrace

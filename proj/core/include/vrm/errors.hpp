#pragma once

#include <stdexcept>
#include <string>

namespace vrm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `path` is a JSON-pointer style location ("/requests/1/arrival").
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Structurally invalid value (non-perfect matching, malformed path, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Internal algorithm state is corrupt (negative slack, broken dual invariant, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Exhaustive oracle refused an instance beyond its size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Fixed-width lattice arithmetic overflowed; callers retry on the big-integer backend.
class LatticeOverflow : public Error {
 public:
  LatticeOverflow() : Error("64-bit lattice arithmetic overflow") {}
};

}  // namespace vrm

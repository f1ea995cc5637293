#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

class DuplicateEdgeId : public Error {
 public:
  using Error::Error;
};

class NotATree : public Error {
 public:
  using Error::Error;
};

/// Continuity, connectivity, or Markov-closure failure on input data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class PieceExplosion : public Error {
 public:
  using Error::Error;
};

class ResourceCap : public Error {
 public:
  using Error::Error;
};

class CombinatorialBlowup : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace hyperdyn

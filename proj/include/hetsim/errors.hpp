#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hetsim {

/// Base of every error the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relation or term used against a carrier it does not live on.
class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

/// Functor kinds of two operands (or of a connector and a system) disagree.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

/// A term, coalgebra, or lambda relation violates its invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Computation exceeds a configured cap (support bits, term counts, ...).
class Intractable : public Error {
 public:
  using Error::Error;
};

/// Text input that does not follow the expected grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(locate(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string locate(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace hetsim

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stackres {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedTree : public Error {
 public:
  using Error::Error;
};

class ContractNodePresent : public Error {
 public:
  ContractNodePresent()
      : Error("tree contains contract nodes; expand them first") {}
};

class PlayerMismatch : public Error {
 public:
  using Error::Error;
};

class IncompleteCut : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  using Error::Error;
};

class IncompleteProfile : public Error {
 public:
  using Error::Error;
};

class DuplicatePlayerInOrder : public Error {
 public:
  using Error::Error;
};

class NotTwoPlayer : public Error {
 public:
  NotTwoPlayer() : Error("the inducible region is defined for two-player games") {}
};

class NotBifurcating : public Error {
 public:
  NotBifurcating()
      : Error("the inducible region needs a bifurcating tree; binarize it first") {}
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

// Arithmetic was attempted on an infinite payoff.
class InfiniteArithmetic : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t predicted, std::uint64_t limit)
      : Error("expansion needs " + std::to_string(predicted) +
              " nodes/cuts, budget is " + std::to_string(limit)),
        predicted_(predicted),
        limit_(limit) {}

  std::uint64_t predicted() const { return predicted_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t predicted_;
  std::uint64_t limit_;
};

// Errors raised while reading the game language. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected)
      : ParseError(line, column, "syntax error: expected " + expected),
        expected_(std::move(expected)) {}

  const std::string& expected() const { return expected_; }

 private:
  std::string expected_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownPlayer : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicatePlayer : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace stackres

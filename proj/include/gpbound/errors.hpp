#pragma once

#include <stdexcept>
#include <string>

namespace gpbound {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph, partition or instance data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A partition spec that admits no feasible partition (e.g. a_i > W).
class InfeasibleSpec : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Stacked constraint rows are linearly dependent.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, int row)
      : Error(what), row_(row) {}
  // Index (in stacked [A; B] order) of the first row found dependent.
  int row() const { return row_; }

 private:
  int row_;
};

class SolverDiverged : public Error {
 public:
  using Error::Error;
};

class EnumerationTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace gpbound

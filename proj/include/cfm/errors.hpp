#pragma once

#include <stdexcept>
#include <string>

namespace cfm {

/// Argument outside the set where a formula is defined (poles, excluded orders).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameter outside its admissible interval.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Numerical evidence that a moment integral does not converge.
class DivergenceSuspected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moment requested at an order where the closed form is infinite.
class MomentDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SeriesDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExtrapolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfm

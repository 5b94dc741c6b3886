#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlife {

// Malformed input text. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A syntactically valid record that violates a domain invariant
// (self-contact, start >= end, ...).
class RecordError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ledger or engine state advanced out of order.
class OrderingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid configuration. `field()` is a dotted path such as "router_params.k".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace dlife

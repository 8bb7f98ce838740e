#pragma once

#include <stdexcept>
#include <string>

namespace polyavis {

/// Invalid configuration; carries the name of the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A computation would exceed its explicit size budget.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace polyavis

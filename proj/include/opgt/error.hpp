#pragma once

#include <stdexcept>
#include <string>

namespace opgt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-domain or degenerate-geometry inputs (latitude beyond the UTM band,
// coincident beam endpoints, zero-wind plume, ...).
struct DomainError : Error {
  using Error::Error;
};

// Scenario/config file problems. Message names the offending key.
struct ConfigError : Error {
  using Error::Error;
};

// CSV log files that do not match the documented schemas.
struct SchemaError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace opgt

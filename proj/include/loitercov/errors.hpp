#pragma once

#include <stdexcept>
#include <string>

namespace loitercov {

class InvalidPolygonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when the area does not fit the fixed-depth bounding square.
// required_multiple is the smallest power-of-two multiple of the base loiter
// radius whose bounding square would contain the area (16, 32, 64, ...).
class AreaTooLargeError : public std::runtime_error {
 public:
  AreaTooLargeError(const std::string& what, int required_multiple)
      : std::runtime_error(what), required_multiple(required_multiple) {}
  int required_multiple;
};

class InvalidModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loitercov

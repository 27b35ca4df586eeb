#pragma once

#include <stdexcept>
#include <string>

namespace zerofid {

// Invalid user-supplied value (dimensions, ranges, malformed input).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Structurally valid request outside the supported regime.
class Unsupported : public std::runtime_error {
 public:
  explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

// State set whose Gram matrix cannot be inverted reliably.
class IllConditionedStateSet : public std::runtime_error {
 public:
  IllConditionedStateSet(const std::string& what, double condition_number)
      : std::runtime_error(what), condition_number(condition_number) {}
  double condition_number;
};

// Decay-fit input that does not determine the model parameters.
class FitDegenerate : public std::runtime_error {
 public:
  explicit FitDegenerate(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zerofid

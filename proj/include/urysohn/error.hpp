#pragma once

#include <stdexcept>
#include <string>

namespace urysohn {

/// Malformed input or a violated precondition. The message names the offending entity.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or search was refused because it exceeds a configured size guard.
class GuardRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug in this library.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace urysohn

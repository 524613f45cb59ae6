#pragma once

#include <stdexcept>
#include <string>

namespace nmfbs {

/// Non-finite values, diverged inner solves, blow-up detection.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Linesearch failed to find an acceptable step within the backtrack cap.
class BacktrackExhaustedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmfbs

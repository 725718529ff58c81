#pragma once
#include <stdexcept>
#include <string>

namespace rtpzero {

// Thrown when a function handed to the zero-counting machinery fails the
// admissibility requirements (nonzero at the interval endpoints, no point
// where the value and the derivative vanish together).
class hypothesis_violation : public std::runtime_error {
 public:
  explicit hypothesis_violation(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a numerical routine cannot reach its accuracy contract
// (e.g. a covariance matrix stays indefinite after the jitter ladder).
class numerical_failure : public std::runtime_error {
 public:
  explicit numerical_failure(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a statistical fit is requested on too few usable points
// (e.g. a log-log rate fit with fewer than three positive values).
class insufficient_data : public std::runtime_error {
 public:
  explicit insufficient_data(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rtpzero

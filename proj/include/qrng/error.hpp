#pragma once

#include <stdexcept>
#include <string>

namespace qrng {

/// Bad argument or violated precondition. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Missing or unreadable file. Also exit code 1.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Floating-point convolution drifted too far from an integer to round safely.
class ConvolutionGuardError : public std::runtime_error {
 public:
  explicit ConvolutionGuardError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace detail
}  // namespace qrng

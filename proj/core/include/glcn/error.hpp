#pragma once

#include <stdexcept>
#include <string>

namespace glcn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input (bad mesh size, unsupported degree, inconsistent config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A sparse linear solve did not reach the requested residual.
class LinearSolveFailed : public Error {
 public:
  LinearSolveFailed(const std::string& what, double relative_residual)
      : Error(what), relative_residual_(relative_residual) {}

  double relative_residual() const noexcept { return relative_residual_; }

 private:
  double relative_residual_;
};

}  // namespace glcn

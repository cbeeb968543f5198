#pragma once

#include <stdexcept>
#include <string>

namespace chiplet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invariant violation; `path()` names the offending field (e.g. "chiplets[2].width").
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Argument outside an operation's domain (e.g. non-positive latency).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// No legal placement move could be drawn.
class CongestionError : public Error {
 public:
  using Error::Error;
};

}  // namespace chiplet

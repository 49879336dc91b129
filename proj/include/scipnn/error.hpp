// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_ERROR_HPP
#define SCIPNN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace scipnn {

enum class ErrorKind {
  Shape,
  Numerical,
  Validation,
  Index,
  Format,
  Io,
  Config,
  Divergence,
};

// Single exception type for the library; the kind drives the C API status code
// and the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace scipnn

#endif  // SCIPNN_ERROR_HPP

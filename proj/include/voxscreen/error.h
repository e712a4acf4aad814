//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_ERROR_H_
#define VOXSCREEN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace voxscreen {

// Coarse failure classes. The CLI reports these as a machine-parseable
// category, so the spellings returned by to_string() are stable.
enum class ErrorKind {
  kParse,
  kValidation,
  kGeometry,
  kSampling,
  kShape,
  kNumeric,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error: public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) { }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class ParseError: public Error {
public:
  ParseError(const std::string &what, std::size_t line)
      : Error(ErrorKind::kParse,
              "line " + std::to_string(line) + ": " + what),
        line_(line) { }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace voxscreen

#endif  // VOXSCREEN_ERROR_H_

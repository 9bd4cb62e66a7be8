// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#pragma once

#include <stdexcept>
#include <string>

namespace crowdmatch {

enum class ErrorKind {
  kDegenerateGeometry,
  kInvalidBox,
  kInputDomain,
  kEmptyInput,
  kInvalidCost,
  kOracleSize,
  kShapeMismatch,
  kConsistency,
  kGeneration,
  kParse,
  kVersion,
  kConfig,
  kIo,
};

const char* to_string(ErrorKind kind);

// Every library failure is reported through this type; `kind()` lets the
// CLI map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace crowdmatch

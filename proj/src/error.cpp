// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include "crowdmatch/error.hpp"

namespace crowdmatch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDegenerateGeometry: return "degenerate geometry";
    case ErrorKind::kInvalidBox: return "invalid box";
    case ErrorKind::kInputDomain: return "input domain";
    case ErrorKind::kEmptyInput: return "empty input";
    case ErrorKind::kInvalidCost: return "invalid cost";
    case ErrorKind::kOracleSize: return "oracle size";
    case ErrorKind::kShapeMismatch: return "shape mismatch";
    case ErrorKind::kConsistency: return "consistency";
    case ErrorKind::kGeneration: return "generation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kVersion: return "version";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "i/o";
  }
  return "unknown";
}

}  // namespace crowdmatch

// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/error.hpp"

namespace rulehier {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::horizon: return "horizon";
    case ErrorCategory::config: return "config";
    case ErrorCategory::io: return "io";
    case ErrorCategory::unknown_scenario: return "unknown_scenario";
  }
  return "unknown";
}

}  // namespace rulehier

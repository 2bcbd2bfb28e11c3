// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rulehier {

/// Coarse error classes; the CLI maps each one to its own exit code.
enum class ErrorCategory {
  invalid_argument,
  domain,
  horizon,
  config,
  io,
  unknown_scenario,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace rulehier

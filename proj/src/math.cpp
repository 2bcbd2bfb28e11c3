// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/math.hpp"

#include "rulehier/error.hpp"

namespace rulehier {
namespace {

void check_soft_args(std::span<const double> xs, double temperature,
                     const char* op) {
  if (xs.empty()) {
    throw Error(ErrorCategory::domain, std::string(op) + ": empty argument list");
  }
  if (!(temperature > 0.0)) {
    throw Error(ErrorCategory::domain,
                std::string(op) + ": temperature must be positive");
  }
}

}  // namespace

double hard_min(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCategory::domain, "min: empty argument list");
  double m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = vmin(m, xs[i]);
  return m;
}

double hard_max(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCategory::domain, "max: empty argument list");
  double m = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) m = vmax(m, xs[i]);
  return m;
}

double smooth_min(std::span<const double> xs, double temperature) {
  check_soft_args(xs, temperature, "smooth_min");
  const double m = hard_min(xs);
  double sum = 0.0;
  for (double x : xs) sum += exp_portable((m - x) / temperature);
  return m - temperature * log_portable(sum);
}

double smooth_max(std::span<const double> xs, double temperature) {
  check_soft_args(xs, temperature, "smooth_max");
  const double m = hard_max(xs);
  double sum = 0.0;
  for (double x : xs) sum += exp_portable((x - m) / temperature);
  return m + temperature * log_portable(sum);
}

}  // namespace rulehier

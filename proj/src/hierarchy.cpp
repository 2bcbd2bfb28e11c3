// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/hierarchy.hpp"

#include <cmath>

#include "rulehier/error.hpp"

namespace rulehier {

std::vector<std::string> RuleHierarchy::names() const {
  std::vector<std::string> out;
  for (const Rule& r : rules) out.push_back(r.name);
  return out;
}

std::vector<double> RuleHierarchy::scales() const {
  std::vector<double> out;
  for (const Rule& r : rules) out.push_back(r.scale);
  return out;
}

void RuleHierarchy::validate() const {
  if (rules.empty()) throw Error(ErrorCategory::invalid_argument, "hierarchy has no rules");
  if (rules.size() > 62) throw Error(ErrorCategory::invalid_argument, "at most 62 rules");
  if (!(a > 2.0)) throw Error(ErrorCategory::invalid_argument, "hierarchy needs a > 2");
  if (!(c > 0.0)) throw Error(ErrorCategory::invalid_argument, "hierarchy needs c > 0");
  for (const Rule& r : rules) {
    if (!(r.scale > 0.0)) {
      throw Error(ErrorCategory::invalid_argument,
                  "rule '" + r.name + "' needs a positive robustness scale");
    }
  }
}

std::vector<double> scale_robustness(std::span<const double> raw,
                                     std::span<const double> scales) {
  if (raw.size() != scales.size()) {
    throw Error(ErrorCategory::invalid_argument, "one scale per rule is required");
  }
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(scales[i] > 0.0)) {
      throw Error(ErrorCategory::invalid_argument, "robustness scales must be positive");
    }
    out[i] = std::tanh(raw[i] / scales[i]);
  }
  return out;
}

std::uint64_t satisfaction_pattern(std::span<const double> rho) {
  if (rho.size() > 62) throw Error(ErrorCategory::invalid_argument, "at most 62 rules");
  std::uint64_t bits = 0;
  for (double r : rho) bits = (bits << 1) | static_cast<std::uint64_t>(step_of(r));
  return bits;
}

std::uint64_t rank(std::span<const double> rho) {
  const std::uint64_t top = std::uint64_t{1} << rho.size();
  return top - satisfaction_pattern(rho);
}

double reward_hard(std::span<const double> rho, double a) {
  if (!(a > 2.0)) throw Error(ErrorCategory::domain, "reward_hard needs a > 2");
  const std::size_t n = rho.size();
  if (n == 0) throw Error(ErrorCategory::domain, "reward_hard needs at least one rule");
  for (double r : rho) {
    if (!(r >= -a / 2.0 && r <= a / 2.0)) {
      throw Error(ErrorCategory::domain, "robustness outside [-a/2, a/2]");
    }
  }
  double weight = 1.0;
  for (std::size_t i = 0; i < n; ++i) weight *= a;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += weight * step_of(rho[i]) + rho[i] / static_cast<double>(n);
    weight /= a;
  }
  return total;
}

}  // namespace rulehier

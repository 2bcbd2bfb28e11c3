// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Rule hierarchies and the rank-preserving reward.
//
// For N rules ordered by decreasing priority and robustness rho (each entry
// in [-a/2, a/2], a > 2):
//
//   rank(rho)   = 2^N - sum_i 2^(N-i) step(rho_i)            in {1..2^N}
//   R_hard(rho) = sum_i a^(N-i+1) step(rho_i) + rho_i / N
//   R_soft(rho) = sum_i a^(N-i+1) sigmoid(c rho_i) + rho_i / N
//
// with step(x) = 0 for x < 0 and 1 otherwise. R_hard strictly decreases
// with rank: satisfying rule i outweighs every lower-priority rule combined
// plus the largest possible change in mean robustness. Within one rank the
// mean robustness breaks ties.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rulehier/stl.hpp"

namespace rulehier {

struct Rule {
  std::string name;
  stl::Formula formula;
  double scale = 1.0;  ///< s in tanh(rho_raw / s)
};

struct RuleHierarchy {
  std::vector<Rule> rules;  ///< highest priority first
  double a = 2.01;
  double c = 30.0;

  std::size_t size() const { return rules.size(); }
  std::vector<std::string> names() const;
  std::vector<double> scales() const;
  /// Throws Error(invalid_argument) unless N >= 1, a > 2, c > 0, s > 0.
  void validate() const;
};

inline int step_of(double rho) { return rho < 0.0 ? 0 : 1; }

/// tanh(raw_i / s_i), componentwise.
std::vector<double> scale_robustness(std::span<const double> raw,
                                     std::span<const double> scales);

/// Rank in 1..2^N (1 = every rule satisfied). N must be at most 62.
std::uint64_t rank(std::span<const double> rho);

/// Throws Error(domain) when a <= 2 or some rho_i lies outside [-a/2, a/2].
double reward_hard(std::span<const double> rho, double a);

template <class S>
S reward_smooth(std::span<const S> rho, double a, double c) {
  using rulehier::sigmoid;
  const std::size_t n = rho.size();
  S total(0.0);
  double weight = 1.0;
  for (std::size_t i = 0; i < n; ++i) weight *= a;  // a^N for the top rule
  for (std::size_t i = 0; i < n; ++i) {
    total = total + S(weight) * sigmoid(S(c) * rho[i]) + rho[i] / S(static_cast<double>(n));
    weight /= a;
  }
  return total;
}

/// Per-rule robustness before scaling.
template <class S>
std::vector<S> raw_robustness(const RuleHierarchy& h, const TrajectoryT<S>& traj,
                              const WorldScene& scene, stl::Semantics semantics,
                              double temperature) {
  std::vector<S> out;
  out.reserve(h.size());
  for (const Rule& r : h.rules) {
    out.push_back(stl::robustness<S>(r.formula, traj, scene, semantics, temperature));
  }
  return out;
}

/// Per-rule robustness after tanh scaling.
template <class S>
std::vector<S> scaled_robustness(const RuleHierarchy& h, const TrajectoryT<S>& traj,
                                 const WorldScene& scene, stl::Semantics semantics,
                                 double temperature) {
  using std::tanh;
  std::vector<S> rho = raw_robustness(h, traj, scene, semantics, temperature);
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = tanh(rho[i] / S(h.rules[i].scale));
  return rho;
}

/// Bits of the satisfied rules, highest priority in the most significant
/// position; rank = 2^N - pattern.
std::uint64_t satisfaction_pattern(std::span<const double> rho);

}  // namespace rulehier

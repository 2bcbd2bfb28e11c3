// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace rulehier::sim {

/// Planning-time summary in the usual mean / std / median / max / min form.
/// std is the population standard deviation.
struct TimingStats {
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  double max = 0.0;
  double min = 0.0;
  std::size_t count = 0;
};

/// Throws Error(invalid_argument) on an empty sample.
TimingStats summarize(std::span<const double> samples);

}  // namespace rulehier::sim

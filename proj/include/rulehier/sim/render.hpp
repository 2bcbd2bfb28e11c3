// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// SVG snapshots of a run: lane lines, stop zones, non-ego keep-out boxes,
// the ego pose, the plan of that cycle and the path executed so far.
// World coordinates are written unchanged inside a y-flipping group, so
// the ego glyph's x/y attributes are the traced state.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rulehier/sim/simulator.hpp"

namespace rulehier::sim {

std::string render_frame(const RunResult& run, std::size_t cycle);

/// Writes frame_NNNN.svg for each requested cycle (all cycles when
/// `cycles` is empty). Throws Error(io) naming the path on failure and
/// Error(invalid_argument) for an empty trace or an out-of-range cycle.
std::vector<std::filesystem::path> emit_frames(const RunResult& run,
                                               const std::filesystem::path& dir,
                                               std::span<const std::size_t> cycles = {});

}  // namespace rulehier::sim

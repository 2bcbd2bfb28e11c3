// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Run output. The trace is JSON lines: a header record carrying the schema
// version and every parameter that shaped the run, then one record per
// cycle. It holds no wall-clock data, so equal inputs give equal bytes.
// Timings go to the separate summary document.

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "rulehier/sim/simulator.hpp"

namespace rulehier::sim {

inline constexpr const char* trace_schema = "rulehier.trace";
inline constexpr int trace_version = 1;

nlohmann::json trace_header(const RunResult& run);
nlohmann::json cycle_record(const CycleTrace& cycle);
nlohmann::json summary_document(const RunResult& run);

void write_trace(std::ostream& out, const RunResult& run);
void write_trace(const std::filesystem::path& path, const RunResult& run);
void write_summary(const std::filesystem::path& path, const RunResult& run);

/// "run.jsonl" -> "run.summary.json"
std::filesystem::path summary_path_for(const std::filesystem::path& trace_path);

}  // namespace rulehier::sim

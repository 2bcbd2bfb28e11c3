// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "kernels_impl.hpp"
#include "pack_neon.hpp"

namespace rulehier::simd::detail {

const KernelTable& neon_table() {
  static constexpr KernelTable table = make_table<NeonPack>(Backend::neon);
  return table;
}

}  // namespace rulehier::simd::detail

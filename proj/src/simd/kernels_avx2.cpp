// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2; only reached after a runtime CPU check.

#include "kernels_impl.hpp"
#include "pack_avx2.hpp"

namespace rulehier::simd::detail {

const KernelTable& avx2_table() {
  static constexpr KernelTable table = make_table<Avx2Pack>(Backend::avx2);
  return table;
}

}  // namespace rulehier::simd::detail

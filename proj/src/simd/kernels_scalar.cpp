// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "kernels_impl.hpp"

namespace rulehier::simd::detail {

const KernelTable& scalar_table() {
  static constexpr KernelTable table = make_table<NoPack>(Backend::scalar);
  return table;
}

}  // namespace rulehier::simd::detail

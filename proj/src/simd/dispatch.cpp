// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "rulehier/error.hpp"
#include "rulehier/simd/kernels.hpp"

namespace rulehier::simd {
namespace detail {
const KernelTable& scalar_table();
#if defined(RULEHIER_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(RULEHIER_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

namespace {

bool cpu_supports(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(RULEHIER_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
#if defined(RULEHIER_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_of(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2:
#if defined(RULEHIER_HAVE_AVX2)
      return &detail::avx2_table();
#else
      return nullptr;
#endif
    case Backend::neon:
#if defined(RULEHIER_HAVE_NEON)
      return &detail::neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  if (name == "neon") return Backend::neon;
  throw Error(ErrorCategory::invalid_argument,
              "unknown SIMD backend '" + std::string(name) + "'");
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("RULEHIER_SIMD"); env != nullptr && *env) {
    const Backend b = parse_backend(env);
    if (!cpu_supports(b)) {
      throw Error(ErrorCategory::invalid_argument,
                  "SIMD backend '" + std::string(env) + "' is not available");
    }
    return table_of(b);
  }
  for (Backend b : {Backend::avx2, Backend::neon}) {
    if (cpu_supports(b)) return table_of(b);
  }
  return table_of(Backend::scalar);
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

const KernelTable& kernels_for(Backend backend) {
  if (!cpu_supports(backend)) {
    throw Error(ErrorCategory::invalid_argument,
                "SIMD backend '" + std::string(backend_name(backend)) +
                    "' is not available");
  }
  return *table_of(backend);
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (cpu_supports(b)) out.push_back(b);
  }
  return out;
}

Backend active_backend() { return kernels().backend; }

void force_backend(Backend backend) {
  active_table().store(&kernels_for(backend), std::memory_order_release);
}

}  // namespace rulehier::simd

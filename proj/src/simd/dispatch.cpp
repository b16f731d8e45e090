#include "kramers/error.hpp"
#include "kramers/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace kramers::simd {

#if !defined(KRAMERS_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !defined(KRAMERS_HAVE_NEON)
const KernelTable* neon_kernels() { return nullptr; }
#endif

namespace {

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &scalar_kernels();
    case Isa::Avx2:
      return avx2_kernels();
    case Isa::Neon:
      return neon_kernels();
  }
  return nullptr;
}

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("KRAMERS_LZ_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
      if (want == to_string(isa) && available(isa)) return table_for(isa);
  }
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (available(isa)) return table_for(isa);
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

bool available(Isa isa) { return table_for(isa) != nullptr && cpu_has(isa); }

const KernelTable& active_kernels() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!available(isa))
    throw InvalidInput("SIMD variant '" + std::string(to_string(isa)) + "' is not available");
  current().store(table_for(isa), std::memory_order_release);
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace kramers::simd

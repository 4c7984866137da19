#include "lcw/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace lcw::simd {

namespace {

const KernelTable kScalar{Isa::scalar, "scalar", &scalar::axpby, &scalar::scale,
                          &scalar::dot, &scalar::gemv_t};

#if defined(LCW_HAVE_AVX2_KERNELS)
const KernelTable kAvx2{Isa::avx2, "avx2", &avx2::axpby, &avx2::scale, &avx2::dot,
                        &avx2::gemv_t};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable *initial_table() {
  const char *env = std::getenv("LCW_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar")
    return &kScalar;
  if (const KernelTable *t = avx2_kernels())
    return t;
  return &kScalar;
}

std::atomic<const KernelTable *> &active() {
  static std::atomic<const KernelTable *> table{initial_table()};
  return table;
}

} // namespace

const KernelTable &kernels() { return *active().load(std::memory_order_acquire); }

const KernelTable &scalar_kernels() { return kScalar; }

const KernelTable *avx2_kernels() {
#if defined(LCW_HAVE_AVX2_KERNELS)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

void select_isa(Isa isa) {
  if (isa == Isa::scalar) {
    active().store(&kScalar, std::memory_order_release);
    return;
  }
  const KernelTable *t = avx2_kernels();
  if (t == nullptr)
    throw std::runtime_error("AVX2 kernels are not available on this machine");
  active().store(t, std::memory_order_release);
}

Isa active_isa() { return kernels().isa; }

} // namespace lcw::simd

#include <cstdlib>
#include <string>

#include "kgframe/simd/kernels.hpp"

namespace kgframe::simd {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::matmul, &scalar::sum_abs_sq};
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::matmul, &avx2::sum_abs_sq};

const KernelTable& select() {
  if (const char* forced = std::getenv("KGFRAME_SIMD")) {
    if (std::string(forced) == "scalar") return kScalar;
  }
  return cpu_supports_avx2() ? kAvx2 : kScalar;
}

}  // namespace

bool cpu_supports_avx2() noexcept {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  if (!avx2::compiled()) return false;
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::Avx2 && cpu_supports_avx2()) return kAvx2;
  return kScalar;
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace kgframe::simd

#pragma once

// Inner-loop kernels for complex<double> arithmetic.
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant. The variant is chosen once at first use from CPUID; setting
// KGFRAME_SIMD=scalar in the environment forces the reference path. The two
// paths agree to rounding (FMA contracts differently), not bit-for-bit.

#include <complex>
#include <cstddef>
#include <string_view>

namespace kgframe::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

// C (m x n) = A (m x k) * B (k x n), all row-major and densely packed.
// C must not alias A or B.
using MatmulFn = void (*)(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k,
                          std::size_t n);
// Sum of |x_i|^2.
using SumAbsSqFn = double (*)(const cplx* x, std::size_t len);

struct KernelTable {
  Isa isa;
  MatmulFn matmul;
  SumAbsSqFn sum_abs_sq;
};

namespace scalar {
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
double sum_abs_sq(const cplx* x, std::size_t len);
}  // namespace scalar

namespace avx2 {
// Only callable when cpu_supports_avx2() is true.
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n);
double sum_abs_sq(const cplx* x, std::size_t len);
bool compiled() noexcept;
}  // namespace avx2

bool cpu_supports_avx2() noexcept;

const KernelTable& table_for(Isa isa);
// The table selected for this process.
const KernelTable& active();

std::string_view to_string(Isa isa) noexcept;

}  // namespace kgframe::simd

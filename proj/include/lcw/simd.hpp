#pragma once

// Dense double-precision kernels behind the jet slot arithmetic and the
// eigenflag residual contractions. Every kernel has a scalar reference
// implementation; an AVX2+FMA variant is used when the CPU supports it.
// Setting LCW_SIMD=scalar in the environment pins the scalar path.

#include <cstddef>

namespace lcw::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char *name;
  // out[i] = a*x[i] + b*y[i]
  void (*axpby)(double a, const double *x, double b, const double *y, double *out,
                std::size_t n);
  // out[i] = a*x[i]
  void (*scale)(double a, const double *x, double *out, std::size_t n);
  double (*dot)(const double *x, const double *y, std::size_t n);
  // y[c] = sum_r x[r] * A[r*cols + c]   (A row-major, rows x cols)
  void (*gemv_t)(const double *A, std::size_t rows, std::size_t cols, const double *x,
                 double *y);
};

const KernelTable &kernels();
const KernelTable &scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable *avx2_kernels();

/// Switches the active table. Throws std::runtime_error if unavailable.
void select_isa(Isa isa);
Isa active_isa();

namespace scalar {
void axpby(double a, const double *x, double b, const double *y, double *out,
           std::size_t n);
void scale(double a, const double *x, double *out, std::size_t n);
double dot(const double *x, const double *y, std::size_t n);
void gemv_t(const double *A, std::size_t rows, std::size_t cols, const double *x,
            double *y);
} // namespace scalar

#if defined(LCW_HAVE_AVX2_KERNELS)
namespace avx2 {
void axpby(double a, const double *x, double b, const double *y, double *out,
           std::size_t n);
void scale(double a, const double *x, double *out, std::size_t n);
double dot(const double *x, const double *y, std::size_t n);
void gemv_t(const double *A, std::size_t rows, std::size_t cols, const double *x,
            double *y);
} // namespace avx2
#endif

} // namespace lcw::simd

#include "lcw/simd.hpp"

namespace lcw::simd::scalar {

void axpby(double a, const double *x, double b, const double *y, double *out,
           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a * x[i] + b * y[i];
}

void scale(double a, const double *x, double *out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a * x[i];
}

double dot(const double *x, const double *y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i] * y[i];
  return s;
}

void gemv_t(const double *A, std::size_t rows, std::size_t cols, const double *x,
            double *y) {
  for (std::size_t c = 0; c < cols; ++c)
    y[c] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double xr = x[r];
    const double *row = A + r * cols;
    for (std::size_t c = 0; c < cols; ++c)
      y[c] += xr * row[c];
  }
}

} // namespace lcw::simd::scalar

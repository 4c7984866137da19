#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace lcw {

/// Dense rank-R array over {0..n-1}^R, row-major.
template <int Rank> class Tensor {
public:
  Tensor() = default;
  explicit Tensor(int n) : n_(n), data_(size_for(n), 0.0) {}

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <class... I> double &operator()(I... is) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(is...)];
  }
  template <class... I> double operator()(I... is) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset(is...)];
  }

  double *data() noexcept { return data_.data(); }
  const double *data() const noexcept { return data_.data(); }
  std::vector<double> &values() noexcept { return data_; }
  const std::vector<double> &values() const noexcept { return data_; }

  double norm() const {
    double s = 0.0;
    for (double v : data_)
      s += v * v;
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : data_)
      m = std::max(m, std::abs(v));
    return m;
  }

  Tensor &operator-=(const Tensor &o) {
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] -= o.data_[i];
    return *this;
  }
  Tensor &operator+=(const Tensor &o) {
    for (std::size_t i = 0; i < data_.size(); ++i)
      data_[i] += o.data_[i];
    return *this;
  }
  Tensor &operator*=(double c) {
    for (double &v : data_)
      v *= c;
    return *this;
  }
  friend Tensor operator-(Tensor a, const Tensor &b) { return a -= b; }
  friend Tensor operator+(Tensor a, const Tensor &b) { return a += b; }
  friend Tensor operator*(double c, Tensor a) { return a *= c; }

private:
  static std::size_t size_for(int n) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r)
      s *= static_cast<std::size_t>(n);
    return s;
  }
  template <class... I> std::size_t offset(I... is) const {
    std::size_t r = 0;
    ((r = r * static_cast<std::size_t>(n_) + static_cast<std::size_t>(is)), ...);
    return r;
  }

  int n_ = 0;
  std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;

/// Components in a new frame: T'_{a..} = sum F_{ia} ... T_{i..}, i.e. every
/// slot contracted with the columns of F.
template <int Rank> Tensor<Rank> change_frame(const Tensor<Rank> &t, const Eigen::MatrixXd &F) {
  const int n = t.dim();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> cur = t.values();
  std::vector<double> next(cur.size());
  // Contract one slot at a time; slot s has stride n^(Rank-1-s).
  std::size_t stride = cur.size();
  for (int s = 0; s < Rank; ++s) {
    stride /= un;
    const std::size_t block = stride * un;
    for (std::size_t base = 0; base < cur.size(); base += block)
      for (std::size_t rest = 0; rest < stride; ++rest)
        for (int a = 0; a < n; ++a) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i)
            acc += F(i, a) * cur[base + static_cast<std::size_t>(i) * stride + rest];
          next[base + static_cast<std::size_t>(a) * stride + rest] = acc;
        }
    cur.swap(next);
  }
  Tensor<Rank> out(n);
  out.values() = std::move(cur);
  return out;
}

} // namespace lcw

#pragma once

// Truncated multivariate Taylor arithmetic of order 3.
//
// A Jet3 over n variables carries f, the gradient, the second derivatives
// and the third derivatives of a function at a fixed point. Mixed partials
// are stored once per sorted multi-index (i <= j, i <= j <= k), so the
// symmetry of the derivative tensors holds by construction. Slots hold
// derivatives, not Taylor coefficients: x*x at x = 3 is (9; 6; 2; 0).

#include <array>
#include <cstddef>
#include <span>

namespace lcw {

class Jet3 {
public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxSlots = 1 + 8 + 36 + 120;

  Jet3() = default;

  static Jet3 constant(int n, double value);
  static Jet3 variable(int index, double base_value, int n);

  int variables() const noexcept { return n_; }
  int slot_count() const noexcept;

  double value() const noexcept { return s_[0]; }
  double grad(int i) const;
  double hess(int i, int j) const;
  double third(int i, int j, int k) const;

  void set_grad(int i, double v);
  void set_hess(int i, int j, double v);
  void set_third(int i, int j, int k, double v);

  /// [value | grad (n) | hess packed (n(n+1)/2) | third packed]
  std::span<const double> slots() const noexcept {
    return {s_.data(), static_cast<std::size_t>(slot_count())};
  }

  /// Keeps the variable count, zeroes all derivatives.
  Jet3 &operator=(double c);

  Jet3 &operator+=(const Jet3 &b);
  Jet3 &operator-=(const Jet3 &b);
  Jet3 &operator*=(const Jet3 &b);
  Jet3 &operator/=(const Jet3 &b);

  friend Jet3 operator+(const Jet3 &a, const Jet3 &b);
  friend Jet3 operator-(const Jet3 &a, const Jet3 &b);
  friend Jet3 operator*(const Jet3 &a, const Jet3 &b);
  friend Jet3 operator/(const Jet3 &a, const Jet3 &b);
  friend Jet3 operator-(const Jet3 &a);
  friend Jet3 operator*(double c, const Jet3 &a);
  friend Jet3 operator*(const Jet3 &a, double c) { return c * a; }
  friend Jet3 operator+(const Jet3 &a, double c);
  friend Jet3 operator+(double c, const Jet3 &a) { return a + c; }

  /// f(a) given f and its first three derivatives at a.value().
  friend Jet3 compose(const Jet3 &a, double f0, double f1, double f2, double f3);

private:
  int n_ = 0;
  std::array<double, kMaxSlots> s_{};
};

Jet3 jet_variable(int index, double base_value, int n);

Jet3 sin(const Jet3 &a);
Jet3 cos(const Jet3 &a);
Jet3 tan(const Jet3 &a);
Jet3 exp(const Jet3 &a);
Jet3 log(const Jet3 &a);
Jet3 sqrt(const Jet3 &a);
Jet3 atan(const Jet3 &a);
Jet3 bump(const Jet3 &a);
Jet3 ipow(const Jet3 &a, int k);
Jet3 reciprocal(const Jet3 &a);
inline double value_of(const Jet3 &a) { return a.value(); }

namespace jet_layout {
int hess_slots(int n);
int third_slots(int n);
/// Position of the sorted pair / triple inside the packed block.
int pair_index(int n, int i, int j);
int triple_index(int n, int i, int j, int k);
} // namespace jet_layout

} // namespace lcw

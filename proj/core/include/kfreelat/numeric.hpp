#pragma once

#include <cmath>
#include <cstdint>

namespace kfreelat {

// Compensated summation; keeps long accumulations at a few ulp.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;

  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// x^e by repeated squaring, e >= 0.
inline double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

inline std::int64_t ipow64(std::int64_t x, int e) {
  std::int64_t r = 1;
  while (e > 0) {
    if (e & 1) r *= x;
    if (e > 1) x *= x;
    e >>= 1;
  }
  return r;
}

// Volume of the n-dimensional Euclidean unit ball.
inline double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace kfreelat

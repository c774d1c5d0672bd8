#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace conecrit::detail {

// Fornberg's recurrence for finite-difference weights on arbitrary nodes.
// Fills w(k, j) = weight of f(x[j]) in the order-k derivative at x0, for
// k = 0..max_order. w is row-major with stride nodes.size().
inline void fd_weights(double x0, std::span<const double> x, int max_order,
                       std::vector<double>& w) {
  const int n = static_cast<int>(x.size());
  const int rows = max_order + 1;
  w.assign(static_cast<std::size_t>(rows) * n, 0.0);
  auto at = [&](int k, int j) -> double& { return w[static_cast<std::size_t>(k) * n + j]; };

  double c1 = 1.0;
  double c4 = x[0] - x0;
  at(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) at(k, i) = c1 * (k * at(k - 1, i - 1) - c5 * at(k, i - 1)) / c2;
        at(0, i) = -c1 * c5 * at(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) at(k, j) = (c4 * at(k, j) - k * at(k - 1, j)) / c3;
      at(0, j) = c4 * at(0, j) / c3;
    }
    c1 = c2;
  }
}

// Derivative of sampled data at node i using a window of `width` nodes
// clipped to the array. Returns d^order f / dx^order evaluated at x[i].
inline double fd_derivative(std::span<const double> x, std::span<const double> f, std::size_t i,
                            int order, std::size_t width, std::vector<double>& scratch) {
  const std::size_t n = x.size();
  std::size_t lo = (i >= width / 2) ? i - width / 2 : 0;
  if (lo + width > n) lo = n - width;
  fd_weights(x[i], x.subspan(lo, width), order, scratch);
  const double* wrow = scratch.data() + static_cast<std::size_t>(order) * width;
  double s = 0;
  for (std::size_t j = 0; j < width; ++j) s += wrow[j] * f[lo + j];
  return s;
}

}  // namespace conecrit::detail

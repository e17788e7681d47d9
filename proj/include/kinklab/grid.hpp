#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kinklab {

// Uniform one-dimensional grid x_i = x0 + i*dx, i = 0..size-1.
struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t size = 0;

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double x_min() const { return x0; }
  double x_max() const { return x(size == 0 ? 0 : size - 1); }
  std::vector<double> points() const;

  // Grid with step approximately `dx` covering [lo, hi]; the step is kept
  // exactly `dx` and the right end may overshoot hi by less than dx.
  static Grid covering(double lo, double hi, double dx);

  bool operator==(const Grid&) const = default;
};

// Trapezoid rule on the uniform grid. Integrands handled here decay at both
// ends, where the rule converges spectrally.
double trapezoid(std::span<const double> f, double dx);

// Same over the index range [first, last] (inclusive).
double trapezoid(std::span<const double> f, double dx, std::size_t first,
                 std::size_t last);

// Fourth-order central first derivative. Values outside the grid are taken
// equal to `left` / `right` (the vacuum the field is clamped to).
std::vector<double> derivative4(std::span<const double> f, double dx,
                                double left, double right);

// Fourth-order central second derivative with the same ghost convention.
void laplacian4(std::span<const double> f, double dx, double left,
                double right, std::span<double> out);

}  // namespace kinklab

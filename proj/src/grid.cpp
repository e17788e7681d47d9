#include "kinklab/grid.hpp"

#include <cmath>

#include "kinklab/error.hpp"

namespace kinklab {

std::vector<double> Grid::points() const {
  std::vector<double> xs(size);
  for (std::size_t i = 0; i < size; ++i) xs[i] = x(i);
  return xs;
}

Grid Grid::covering(double lo, double hi, double dx) {
  if (!(dx > 0.0)) throw KinkError(ErrorCode::NonPositiveStep, "grid step must be positive");
  if (!(hi > lo)) throw KinkError(ErrorCode::InvalidArgument, "empty grid interval");
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / dx - 1e-9));
  return Grid{lo, dx, cells + 1};
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.empty()) return 0.0;
  return trapezoid(f, dx, 0, f.size() - 1);
}

double trapezoid(std::span<const double> f, double dx, std::size_t first,
                 std::size_t last) {
  if (last <= first) return 0.0;
  double sum = 0.5 * (f[first] + f[last]);
  for (std::size_t i = first + 1; i < last; ++i) sum += f[i];
  return sum * dx;
}

namespace {

inline double at(std::span<const double> f, std::ptrdiff_t i, double left,
                 double right) {
  if (i < 0) return left;
  if (i >= static_cast<std::ptrdiff_t>(f.size())) return right;
  return f[static_cast<std::size_t>(i)];
}

}  // namespace

std::vector<double> derivative4(std::span<const double> f, double dx,
                                double left, double right) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  std::vector<double> d(f.size());
  const double c = 1.0 / (12.0 * dx);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    } else {
      d[i] = c * (at(f, i - 2, left, right) - 8.0 * at(f, i - 1, left, right) +
                  8.0 * at(f, i + 1, left, right) - at(f, i + 2, left, right));
    }
  }
  return d;
}

void laplacian4(std::span<const double> f, double dx, double left,
                double right, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const double c = 1.0 / (12.0 * dx * dx);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      out[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] +
                    16.0 * f[i + 1] - f[i + 2]);
    } else {
      out[i] = c * (-at(f, i - 2, left, right) + 16.0 * at(f, i - 1, left, right) -
                    30.0 * f[i] + 16.0 * at(f, i + 1, left, right) -
                    at(f, i + 2, left, right));
    }
  }
}

}  // namespace kinklab

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cmtomo/parallel.hpp"

namespace cmtomo {

/// Uniform grid x_i = x0 + i*dx, i < count, with count a power of two.
struct Grid {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t count = 0;

  double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double back() const { return x(count - 1); }
  void validate() const;

  /// Grid whose point count/2 sits exactly on X = 0 and which reaches at
  /// least `half_width` on both sides.
  static Grid centered(double dx, double half_width);

  friend bool operator==(const Grid&, const Grid&) = default;
};

std::size_t next_pow2(std::size_t n);

/// Largest grid any operation will allocate (2^22 points).
inline constexpr std::size_t max_grid_points = std::size_t{1} << 22;

double trapezoid(const Grid& g, std::span<const double> f);
/// Running trapezoid integral, F[0] = 0.
std::vector<double> cumulative_trapezoid(const Grid& g, std::span<const double> f);
/// Integral of the piecewise-linear interpolant of f over [a, b].
double integrate_interval(const Grid& g, std::span<const double> f, double a, double b);
/// Linear interpolation, zero outside the grid.
double interpolate(const Grid& g, std::span<const double> f, double x);

/// f(x_i) for every grid point. The parallel and serial paths evaluate the
/// same expression per point, so their outputs are bit-identical.
template <class F>
std::vector<double> evaluate_on_grid(const Grid& g, F&& f, Exec exec = Exec::parallel) {
  std::vector<double> v(g.count);
  const auto n = static_cast<std::ptrdiff_t>(g.count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) v[i] = f(g.x(static_cast<std::size_t>(i)));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) v[i] = f(g.x(static_cast<std::size_t>(i)));
  }
  return v;
}

}  // namespace cmtomo

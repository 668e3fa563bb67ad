#include "cmtomo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmtomo/errors.hpp"

namespace cmtomo {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void Grid::validate() const {
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) throw ConfigError("grid: dx must be positive");
  if (count < 2 || (count & (count - 1)) != 0)
    throw ConfigError("grid: count must be a power of two >= 2, got " + std::to_string(count));
}

Grid Grid::centered(double dx, double half_width) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw NumericalError("grid: spacing underflow or invalid dx");
  const double cells = std::ceil(half_width / dx) + 1.0;
  if (!(cells < static_cast<double>(max_grid_points))) {
    throw NumericalError("grid: " + std::to_string(2.0 * cells) + " points exceed the maximum of " +
                         std::to_string(max_grid_points));
  }
  const std::size_t count = next_pow2(2 * static_cast<std::size_t>(cells));
  if (count > max_grid_points) {
    throw NumericalError("grid: " + std::to_string(count) + " points exceed the maximum of " +
                         std::to_string(max_grid_points));
  }
  return Grid{-static_cast<double>(count / 2) * dx, dx, count};
}

double trapezoid(const Grid& g, std::span<const double> f) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * g.dx;
}

std::vector<double> cumulative_trapezoid(const Grid& g, std::span<const double> f) {
  std::vector<double> F(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) F[i] = F[i - 1] + 0.5 * g.dx * (f[i - 1] + f[i]);
  return F;
}

double interpolate(const Grid& g, std::span<const double> f, double x) {
  const double t = (x - g.x0) / g.dx;
  if (t < 0.0 || t > static_cast<double>(f.size() - 1)) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(t), f.size() - 2);
  const double u = t - static_cast<double>(i);
  return (1.0 - u) * f[i] + u * f[i + 1];
}

double integrate_interval(const Grid& g, std::span<const double> f, double a, double b) {
  if (b < a) return -integrate_interval(g, f, b, a);
  a = std::max(a, g.x0);
  b = std::min(b, g.back());
  if (!(b > a)) return 0.0;
  const auto cell = [&](double x) {
    return std::min(static_cast<std::size_t>((x - g.x0) / g.dx), f.size() - 2);
  };
  const std::size_t ia = cell(a);
  const std::size_t ib = cell(b);
  // Exact integral of the linear interpolant between two points inside one cell.
  const auto piece = [&](double lo, double hi) {
    return 0.5 * (interpolate(g, f, lo) + interpolate(g, f, hi)) * (hi - lo);
  };
  if (ia == ib) return piece(a, b);
  double s = piece(a, g.x(ia + 1));
  for (std::size_t i = ia + 1; i < ib; ++i) s += 0.5 * g.dx * (f[i] + f[i + 1]);
  s += piece(g.x(ib), b);
  return s;
}

}  // namespace cmtomo

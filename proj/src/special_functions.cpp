#include "cmtomo/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cmtomo/errors.hpp"

namespace cmtomo::special {

namespace {

constexpr double pi_m14 = 0.75112554446494248286;  // pi^{-1/4}
constexpr double rescale_threshold = 1e150;
constexpr double log_rescale = 345.38776394910684;  // ln(1e150)

}  // namespace

double hermite_eval(int n, double y) {
  if (n < 0) throw std::invalid_argument("hermite_eval: n must be nonnegative");
  if (n == 0) return 1.0;
  double hm1 = 1.0;
  double h = 2.0 * y;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * y * h - 2.0 * k * hm1;
    hm1 = h;
    h = next;
  }
  if (!std::isfinite(h)) {
    throw std::overflow_error("hermite_eval: H_" + std::to_string(n) + " overflows at y=" +
                              std::to_string(y));
  }
  return h;
}

std::vector<double> hermite_functions(int nmax, double y) {
  if (nmax < 0) throw std::invalid_argument("hermite_functions: nmax must be nonnegative");
  // Recurrence on the orthonormal polynomials p_k = h_k e^{y^2/2}; the
  // Gaussian is applied at the end together with the accumulated scale.
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  std::vector<double> log_scale(out.size(), 0.0);
  double pm1 = 0.0;
  double p = pi_m14;
  double scale = 0.0;
  out[0] = p;
  for (int k = 0; k < nmax; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * y * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
    pm1 = p;
    p = next;
    if (std::abs(p) > rescale_threshold) {
      p /= rescale_threshold;
      pm1 /= rescale_threshold;
      scale += log_rescale;
    }
    out[k + 1] = p;
    log_scale[k + 1] = scale;
  }
  const double g = -0.5 * y * y;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k] != 0.0) out[k] *= std::exp(g + log_scale[k]);
  }
  return out;
}

double hermite_function(int n, double y) {
  if (n < 0) throw std::invalid_argument("hermite_function: n must be nonnegative");
  double pm1 = 0.0;
  double p = pi_m14;
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * y * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
    pm1 = p;
    p = next;
    if (std::abs(p) > rescale_threshold) {
      p /= rescale_threshold;
      pm1 /= rescale_threshold;
      scale += log_rescale;
    }
  }
  if (p == 0.0) return 0.0;
  return p * std::exp(-0.5 * y * y + scale);
}

double hermite_sq_density_factor(int n, double y) {
  const double h = hermite_function(n, y);
  return h * h;
}

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: n must be nonnegative");
  return std::lgamma(n + 1.0);
}

namespace {

struct PolyEval {
  double p;    // orthonormal polynomial p_m(z), up to the positive factor e^{-scale}
  double pm1;  // p_{m-1}(z), same factor
  double scale;
};

PolyEval orthonormal_poly(int m, double z) {
  double pm1 = 0.0;
  double p = pi_m14;
  double scale = 0.0;
  for (int k = 0; k < m; ++k) {
    double next = std::sqrt(2.0 / (k + 1)) * z * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
    pm1 = p;
    p = next;
    if (std::abs(p) > rescale_threshold) {
      p /= rescale_threshold;
      pm1 /= rescale_threshold;
      scale += log_rescale;
    }
  }
  return {p, pm1, scale};
}

// Newton on p_m inside the bracket [lo, hi], bisecting whenever a step
// leaves it. p_m' = sqrt(2m) p_{m-1}.
double polish_root(int m, double lo, double hi, double tol) {
  double flo = orthonormal_poly(m, lo).p;
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const auto e = orthonormal_poly(m, z);
    if (e.p == 0.0) return z;
    if ((e.p > 0.0) == (flo > 0.0)) {
      lo = z;
      flo = e.p;
    } else {
      hi = z;
    }
    const double step = e.p / (std::sqrt(2.0 * m) * e.pm1);
    double next = z - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - z);
    z = next;
    if (moved <= tol * std::max(1.0, std::abs(z))) {
      // One more Newton step from the converged point.
      const auto f = orthonormal_poly(m, z);
      return z - f.p / (std::sqrt(2.0 * m) * f.pm1);
    }
  }
  throw NumericalError("gauss_hermite: Newton iteration did not converge for m=" + std::to_string(m));
}

}  // namespace

QuadratureRule gauss_hermite(int m) {
  if (m < 1 || m > 512) throw std::invalid_argument("gauss_hermite: m must be in [1, 512]");
  constexpr double tol = 1e-14;

  // Zeros of H_m are never closer than the asymptotic central spacing
  // pi/sqrt(2m+1); scanning at a quarter of it isolates each positive root
  // in its own bracket.
  const double spacing = special::pi / std::sqrt(2.0 * m + 1.0);
  const double step = 0.25 * spacing;
  const double top = std::sqrt(2.0 * m + 1.0) + 1.0;
  std::vector<double> positive;
  const double start = (m % 2 == 1) ? 0.5 * step : 0.0;
  double a = start;
  double fa = orthonormal_poly(m, a).p;
  while (a < top && static_cast<int>(positive.size()) < m / 2) {
    const double b = a + step;
    const double fb = orthonormal_poly(m, b).p;
    if ((fa > 0.0) != (fb > 0.0)) positive.push_back(polish_root(m, a, b, tol));
    a = b;
    fa = fb;
  }
  if (static_cast<int>(positive.size()) != m / 2) {
    throw NumericalError("gauss_hermite: found " + std::to_string(positive.size()) + " of " +
                         std::to_string(m / 2) + " positive roots for m=" + std::to_string(m));
  }

  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.scaled_weights.resize(m);
  const auto weight_at = [&](std::size_t lo_idx, std::size_t hi_idx, double z) {
    const auto e = orthonormal_poly(m, z);
    const double hm1 = e.pm1 * std::exp(-0.5 * z * z + e.scale);
    const double scaled = 1.0 / (m * hm1 * hm1);
    rule.scaled_weights[lo_idx] = rule.scaled_weights[hi_idx] = scaled;
    rule.weights[lo_idx] = rule.weights[hi_idx] = scaled * std::exp(-z * z);
  };
  const std::size_t half = static_cast<std::size_t>(m / 2);
  for (std::size_t i = 0; i < half; ++i) {
    const double z = positive[half - 1 - i];  // largest first
    rule.nodes[i] = -z;
    rule.nodes[m - 1 - i] = z;
    weight_at(i, m - 1 - i, z);
  }
  if (m % 2 == 1) {
    rule.nodes[half] = 0.0;
    weight_at(half, half, 0.0);
  }
  for (int i = 1; i < m; ++i) {
    if (!(rule.nodes[i] > rule.nodes[i - 1])) {
      throw NumericalError("gauss_hermite: nodes not strictly increasing for m=" + std::to_string(m));
    }
  }
  return rule;
}

namespace {

// Orthonormal Laguerre polynomials L_m(t), L_{m-1}(t) (alpha = 0), rescaled
// like orthonormal_poly.
PolyEval laguerre_poly(int m, double t) {
  double pm1 = 0.0;
  double p = 1.0;
  double scale = 0.0;
  for (int k = 0; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 - t) * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = next;
    if (std::abs(p) > rescale_threshold) {
      p /= rescale_threshold;
      pm1 /= rescale_threshold;
      scale += log_rescale;
    }
  }
  return {p, pm1, scale};
}

double polish_laguerre_root(int m, double lo, double hi, double tol) {
  double flo = laguerre_poly(m, lo).p;
  double t = 0.5 * (lo + hi);
  const auto newton = [m](double x, const PolyEval& e) {
    // L_m' = m (L_m - L_{m-1}) / t
    return e.p * x / (m * (e.p - e.pm1));
  };
  for (int it = 0; it < 200; ++it) {
    const auto e = laguerre_poly(m, t);
    if (e.p == 0.0) return t;
    if ((e.p > 0.0) == (flo > 0.0)) {
      lo = t;
      flo = e.p;
    } else {
      hi = t;
    }
    double next = t - newton(t, e);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - t);
    t = next;
    if (moved <= tol * std::max(1.0, t)) return t - newton(t, laguerre_poly(m, t));
  }
  throw NumericalError("gauss_laguerre: Newton iteration did not converge for m=" + std::to_string(m));
}

}  // namespace

QuadratureRule gauss_laguerre(int m) {
  if (m < 1 || m > 512) throw std::invalid_argument("gauss_laguerre: m must be in [1, 512]");
  constexpr double tol = 1e-14;
  // In u = sqrt(t) the zeros of L_m are spaced like those of H_{2m}; scan u.
  const double step = 0.2 * special::pi / std::sqrt(4.0 * m + 2.0);
  const double top = std::sqrt(4.0 * m + 2.0) + 2.0;
  std::vector<double> roots;
  double ua = 0.0;
  double fa = 1.0;  // L_m(0) = 1
  while (ua < top && static_cast<int>(roots.size()) < m) {
    const double ub = ua + step;
    const double fb = laguerre_poly(m, ub * ub).p;
    if ((fa > 0.0) != (fb > 0.0)) roots.push_back(polish_laguerre_root(m, ua * ua, ub * ub, tol));
    ua = ub;
    fa = fb;
  }
  if (static_cast<int>(roots.size()) != m) {
    throw NumericalError("gauss_laguerre: found " + std::to_string(roots.size()) + " of " +
                         std::to_string(m) + " roots");
  }
  QuadratureRule rule;
  rule.nodes = roots;
  rule.weights.resize(m);
  rule.scaled_weights.resize(m);
  for (int i = 0; i < m; ++i) {
    const double t = roots[i];
    const auto e = laguerre_poly(m, t);
    // w e^{t} = t / (m^2 (L_{m-1}(t) e^{-t/2})^2)
    const double lm1 = e.pm1 * std::exp(-0.5 * t + e.scale);
    rule.scaled_weights[i] = t / (static_cast<double>(m) * m * lm1 * lm1);
    rule.weights[i] = rule.scaled_weights[i] * std::exp(-t);
  }
  for (int i = 1; i < m; ++i) {
    if (!(rule.nodes[i] > rule.nodes[i - 1]))
      throw NumericalError("gauss_laguerre: nodes not strictly increasing for m=" + std::to_string(m));
  }
  return rule;
}

}  // namespace cmtomo::special

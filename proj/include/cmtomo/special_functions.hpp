#pragma once

#include <vector>

namespace cmtomo::special {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt_pi = 1.77245385090551602730;

/// Physicists' Hermite polynomial H_n(y) from the three-term recurrence.
/// Throws std::overflow_error once the value leaves the double range; use
/// hermite_function() for large n.
double hermite_eval(int n, double y);

/// Orthonormal Hermite function H_n(y) e^{-y^2/2} / sqrt(2^n n! sqrt(pi)).
/// Evaluated with a rescaled recurrence, so n in the thousands and |y| far
/// in the tail neither overflow nor underflow prematurely.
double hermite_function(int n, double y);

/// All orthonormal Hermite functions h_0(y)..h_{nmax}(y).
std::vector<double> hermite_functions(int nmax, double y);

/// H_n(y)^2 e^{-y^2} / (2^n n! sqrt(pi)); the squared Hermite function.
/// Integrates to one over the real line for every n.
double hermite_sq_density_factor(int n, double y);

double log_factorial(int n);

struct QuadratureRule {
  std::vector<double> nodes;    ///< strictly increasing, symmetric about 0
  std::vector<double> weights;  ///< for the weight function e^{-y^2}
  /// weights[i] * exp(nodes[i]^2). These stay finite where the plain weights
  /// underflow (outermost nodes for m beyond roughly 360) and integrate f(y)
  /// without a weight function: int f ~ sum scaled_weights[i] f(nodes[i]).
  std::vector<double> scaled_weights;
};

/// m-point Gauss-Hermite rule, 1 <= m <= 512. Nodes are roots of H_m,
/// polished by Newton iteration; throws NumericalError if a root does not
/// converge to 1e-14.
QuadratureRule gauss_hermite(int m);

/// m-point Gauss-Laguerre rule for the weight e^{-t} on [0, inf), 1 <= m <= 512.
/// Same layout as gauss_hermite; scaled_weights are weights * e^{t}.
QuadratureRule gauss_laguerre(int m);

}  // namespace cmtomo::special

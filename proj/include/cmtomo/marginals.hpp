#pragma once

#include <string>
#include <vector>

#include "cmtomo/grid.hpp"
#include "cmtomo/parallel.hpp"
#include "cmtomo/states.hpp"

namespace cmtomo {

enum class Parity { even, odd };

struct MarginalMeta {
  ModeSpec mode;
  double mu = 1.0;
  double nu = 0.0;
  double hbar = 1.0;
  /// Factor applied so the trapezoid integral is one (1 when none was needed).
  double rescale = 1.0;
  double pre_rescale_integral = 1.0;
  std::vector<std::string> warnings;
};

/// Symplectic tomogram of one mode sampled on a grid.
struct MarginalDensity {
  Grid grid;
  std::vector<double> values;
  MarginalMeta meta;
};

/// Fock tomogram: (1/s) h_n(X/s)^2 with s^2 = hbar (mu^2 + nu^2).
/// Throws ConfigError for the degenerate frame mu = nu = 0.
double fock_tomogram(int n, double mu, double nu, double hbar, double X);

MarginalDensity fock_tomogram(int n, double mu, double nu, double hbar, const Grid& grid,
                              Exec exec = Exec::parallel);

/// N_+ = 1/sqrt(2(1+e^{-2|a|^2})), N_- = 1/sqrt(2(1-e^{-2|a|^2})).
double cat_normalization(cplx alpha, Parity parity);

/// Closed-form even/odd coherent tomogram with the normalization constant to
/// the first power, as printed. Its integral is 1/N_pm, not one.
/// The inner exponent scales with sqrt(hbar) (identical to the printed form
/// at hbar = 1).
double evenodd_value(cplx alpha, Parity parity, double mu, double nu, double hbar, double X);

/// The closed form exactly as printed, with hbar rather than sqrt(hbar) in
/// the inner exponent. Kept only for the discrepancy report.
double evenodd_value_printed(cplx alpha, Parity parity, double mu, double nu, double hbar, double X);

/// evenodd_value on a grid, rescaled to unit trapezoid integral. A warning
/// is recorded when the raw integral is off by more than 5%.
MarginalDensity evenodd_tomogram(cplx alpha, Parity parity, double mu, double nu, double hbar,
                                 const Grid& grid, Exec exec = Exec::parallel);

/// Tomogram of the pure state sum_k c_k |k> as |sum_k c_k A_k(X)|^2 with
/// A_k = (hbar rho)^{-1/4} e^{-i s k theta} h_k(X/sqrt(hbar rho)),
/// theta = atan2(nu, mu). The phase sign s is calibrated against the
/// coherent-state Gaussian and the moduli against fock_tomogram; failure of
/// either check (1e-8) throws NumericalError.
MarginalDensity tomogram_oracle(const FockExpansion& psi, double mu, double nu, double hbar,
                                const Grid& grid, Exec exec = Exec::parallel);

/// Point value of the oracle tomogram, no calibration.
double tomogram_oracle_value(const FockExpansion& psi, double mu, double nu, double hbar, double X);

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double abs3 = 0.0;  ///< E|X|^3
};

/// Trapezoid moments on the density's grid.
Moments moments(const MarginalDensity& d);
Moments moments(const Grid& g, std::span<const double> values);

/// hbar (mu^2 + nu^2)(1/2 + n)
double fock_var_closed(int n, double mu, double nu, double hbar);

/// The printed even/odd variance expression, term for term:
/// N hbar [(1+e^{-2|a|^2}) rho + 4 (Re a mu + Im a nu)^2 -+ 4 e^{-2|a|^2} (Im a mu + Re a nu)^2].
double evenodd_var_closed(cplx alpha, Parity parity, double mu, double nu, double hbar);

struct Abs3Bound {
  double abs3 = 0.0;
  double bound_ratio = 0.0;  ///< abs3 / (n^{3/2} (hbar rho)^{3/2}); n = 0 uses (hbar rho)^{3/2}
};

/// E|X|^3 of the Fock tomogram. In y = X / sqrt(hbar rho) and t = y^2 the
/// integral is a Gauss-Laguerre integral of a polynomial, hence exact.
Abs3Bound fock_abs3_bound_check(int n, double mu, double nu, double hbar);

struct Abs3Sup {
  int argmax = 0;
  double sup_ratio = 0.0;
};
/// Largest bound_ratio over 1 <= n <= nmax (frame-independent).
Abs3Sup fock_abs3_sup(int nmax);

// Matrix elements of X = mu q + nu p between Fock expansions, from ladder
// operators (m = Omega = 1).
cplx matrix_element_x(const FockExpansion& bra, const FockExpansion& ket, double mu, double nu,
                      double hbar);
cplx matrix_element_x2(const FockExpansion& bra, const FockExpansion& ket, double mu, double nu,
                       double hbar);

struct QuadratureMoments {
  double mean = 0.0;
  double var = 0.0;
};
QuadratureMoments expansion_moments(const FockExpansion& psi, double mu, double nu, double hbar);

/// Printed matrix elements of coherent states, for the discrepancy report.
namespace printed {
cplx x_diag(cplx alpha, double mu, double nu, double hbar);    ///< <a|x|a>
cplx x_cross(cplx alpha, double mu, double nu, double hbar);   ///< <-a|x|a>
cplx x2_diag(cplx alpha, double mu, double nu, double hbar);   ///< <a|x^2|a>
cplx x2_cross(cplx alpha, double mu, double nu, double hbar);  ///< <-a|x^2|a>
/// <X|a> with the printed exponent sqrt(alpha) X / sqrt(hbar).
cplx coherent_wavefunction(cplx alpha, double hbar, double X);
}  // namespace printed

/// <X|a> with exponent sqrt(2) alpha X / sqrt(hbar).
cplx coherent_wavefunction(cplx alpha, double hbar, double X);

// Grid policy: extent +-8 sigma, dx <= sigma/64 and fine enough to resolve
// the fastest oscillation of the density.

/// Variance of the mode's tomogram in frame (mu, nu): closed form for Fock
/// modes, ladder-operator moments of the Fock expansion otherwise.
double mode_variance(const ModeSpec& mode, double mu, double nu, double hbar);
double policy_dx(const ModeSpec& mode, double mu, double nu, double hbar);
Grid policy_grid(const ModeSpec& mode, double mu, double nu, double hbar);

/// Tomogram of any mode kind on the given grid (Fock closed form or the
/// rescaled even/odd closed form).
MarginalDensity mode_marginal(const ModeSpec& mode, double mu, double nu, double hbar,
                              const Grid& grid, Exec exec = Exec::parallel);

}  // namespace cmtomo

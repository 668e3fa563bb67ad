#include "cmtomo/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmtomo/errors.hpp"
#include "cmtomo/special_functions.hpp"

namespace cmtomo {

using special::pi;
using special::sqrt_pi;

namespace {

double frame_rho(double mu, double nu) {
  const double rho = mu * mu + nu * nu;
  if (!(rho > 0.0)) throw ConfigError("degenerate frame: mu = nu = 0");
  return rho;
}

void check_hbar(double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
}

// (1 + e^{-2a}) +- 2 cos(b) e^{-a}, times e^{a}: the modulus
// |e^z +- e^{-z}|^2 = 2 cosh(2 Re z) +- 2 cos(2 Im z) split so the growing
// exponential can be merged with the Gaussian envelope.
struct Interference {
  double log_scale;
  double factor;
};

Interference interference(cplx z, Parity parity) {
  const double a = std::abs(2.0 * z.real());
  const double ea = std::exp(-a);
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  return {a, 1.0 + ea * ea + sign * 2.0 * std::cos(2.0 * z.imag()) * ea};
}

// Shared body of the closed form; `inner_scale` multiplies hbar (iμ - ν) in
// the inner exponent's denominator.
double evenodd_closed(cplx alpha, Parity parity, double mu, double nu, double hbar, double X,
                      double inner_denominator_scale) {
  check_hbar(hbar);
  const double rho = frame_rho(mu, nu);
  if (parity == Parity::odd && std::abs(alpha) == 0.0)
    throw ConfigError("odd coherent state requires |alpha| > 0");
  const cplx I(0.0, 1.0);
  const double re_sum = 2.0 * alpha.real();
  // nu (a^2/(nu - i mu) + conj(a)^2/(nu + i mu)) is real: 2 nu Re(a^2/(nu - i mu)).
  const double cross = 2.0 * nu * std::real(alpha * alpha / cplx(nu, -mu));
  const double constant = -0.5 * re_sum * re_sum + cross;
  const cplx z = I * std::sqrt(2.0) * alpha * X / (inner_denominator_scale * cplx(-nu, mu));
  const auto intf = interference(z, parity);
  const double expo = constant - X * X / (hbar * rho) + intf.log_scale;
  return cat_normalization(alpha, parity) / std::sqrt(pi * hbar * rho) * std::exp(expo) * intf.factor;
}

}  // namespace

double fock_tomogram(int n, double mu, double nu, double hbar, double X) {
  if (n < 0) throw ConfigError("Fock level must be nonnegative");
  check_hbar(hbar);
  const double s = std::sqrt(hbar * frame_rho(mu, nu));
  return special::hermite_sq_density_factor(n, X / s) / s;
}

MarginalDensity fock_tomogram(int n, double mu, double nu, double hbar, const Grid& grid, Exec exec) {
  grid.validate();
  (void)fock_tomogram(n, mu, nu, hbar, 0.0);
  MarginalDensity d;
  d.grid = grid;
  d.values = evaluate_on_grid(grid, [&](double X) { return fock_tomogram(n, mu, nu, hbar, X); }, exec);
  d.meta.mode = ModeSpec::fock(n);
  d.meta.mu = mu;
  d.meta.nu = nu;
  d.meta.hbar = hbar;
  d.meta.pre_rescale_integral = trapezoid(grid, d.values);
  return d;
}

double cat_normalization(cplx alpha, Parity parity) {
  const double e = std::exp(-2.0 * std::norm(alpha));
  if (parity == Parity::even) return 1.0 / std::sqrt(2.0 * (1.0 + e));
  const double d = -std::expm1(-2.0 * std::norm(alpha));
  if (!(d > 0.0)) throw ConfigError("odd coherent state requires |alpha| > 0");
  return 1.0 / std::sqrt(2.0 * d);
}

double evenodd_value(cplx alpha, Parity parity, double mu, double nu, double hbar, double X) {
  return evenodd_closed(alpha, parity, mu, nu, hbar, X, std::sqrt(hbar));
}

double evenodd_value_printed(cplx alpha, Parity parity, double mu, double nu, double hbar, double X) {
  return evenodd_closed(alpha, parity, mu, nu, hbar, X, hbar);
}

MarginalDensity evenodd_tomogram(cplx alpha, Parity parity, double mu, double nu, double hbar,
                                 const Grid& grid, Exec exec) {
  grid.validate();
  (void)evenodd_value(alpha, parity, mu, nu, hbar, 0.0);
  MarginalDensity d;
  d.grid = grid;
  d.values = evaluate_on_grid(
      grid, [&](double X) { return evenodd_value(alpha, parity, mu, nu, hbar, X); }, exec);
  const double integral = trapezoid(grid, d.values);
  if (!(integral > 0.0)) throw NumericalError("even/odd tomogram integrates to zero on the grid");
  const double scale = 1.0 / integral;
  for (auto& v : d.values) v *= scale;
  d.meta.mode = parity == Parity::even ? ModeSpec::even(alpha) : ModeSpec::odd(alpha);
  d.meta.mu = mu;
  d.meta.nu = nu;
  d.meta.hbar = hbar;
  d.meta.rescale = scale;
  d.meta.pre_rescale_integral = integral;
  if (std::abs(integral - 1.0) > 0.05) {
    std::ostringstream os;
    os.precision(10);
    os << "normalization mismatch: closed-form integral " << integral << ", rescaled by " << scale;
    d.meta.warnings.push_back(os.str());
  }
  return d;
}

namespace {

double oracle_value(const FockExpansion& psi, double s, cplx phase, double X) {
  // sum_k c_k phase^k h_k(y) with the rescaled Hermite recurrence.
  const double y = X / s;
  constexpr double pi_m14 = 0.75112554446494248286;
  constexpr double big = 1e150;
  constexpr double log_big = 345.38776394910684;
  double pm1 = 0.0;
  double p = pi_m14;
  double scale = 0.0;
  cplx ph = 1.0;
  cplx acc = psi.coefficients[0] * p;
  const int D = psi.truncation();
  for (int k = 0; k < D; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * y * p - std::sqrt(static_cast<double>(k) / (k + 1)) * pm1;
    pm1 = p;
    p = next;
    ph *= phase;
    if (std::abs(p) > big) {
      p /= big;
      pm1 /= big;
      acc /= big;
      scale += log_big;
    }
    acc += psi.coefficients[k + 1] * ph * p;
  }
  const double mod2 = std::norm(acc);
  if (mod2 == 0.0) return 0.0;
  return mod2 * std::exp(-y * y + 2.0 * scale) / s;
}

cplx oracle_phase(double mu, double nu, double sign) {
  const double r = std::sqrt(mu * mu + nu * nu);
  return cplx(mu / r, -sign * nu / r);
}

// Coherent |a> tomogram: Gaussian, mean sqrt(2 hbar)(Re a mu + Im a nu),
// variance hbar rho / 2.
double coherent_gaussian(cplx a, double mu, double nu, double hbar, double X) {
  const double rho = mu * mu + nu * nu;
  const double mean = std::sqrt(2.0 * hbar) * (a.real() * mu + a.imag() * nu);
  const double var = 0.5 * hbar * rho;
  return std::exp(-(X - mean) * (X - mean) / (2.0 * var)) / std::sqrt(2.0 * pi * var);
}

double calibrate_phase_sign(double mu, double nu, double hbar) {
  const cplx a_ref(0.8, 0.6);
  const auto ref = coherent_expansion(a_ref);
  const double s = std::sqrt(hbar * (mu * mu + nu * nu));
  double best_sign = 0.0;
  double best_err = INFINITY;
  for (double sign : {1.0, -1.0}) {
    double err = 0.0;
    for (double t : {-2.0, -1.0, -0.3, 0.0, 0.4, 1.1, 2.5}) {
      const double X = t * s;
      const double g = coherent_gaussian(a_ref, mu, nu, hbar, X);
      err = std::max(err, std::abs(oracle_value(ref, s, oracle_phase(mu, nu, sign), X) - g) * s);
    }
    if (err < best_err) {
      best_err = err;
      best_sign = sign;
    }
  }
  if (!(best_err <= 1e-8)) {
    std::ostringstream os;
    os << "tomogram oracle calibration failed: coherent reference off by " << best_err;
    throw NumericalError(os.str());
  }
  return best_sign;
}

void calibrate_moduli(int D, double mu, double nu, double hbar) {
  const double s = std::sqrt(hbar * (mu * mu + nu * nu));
  const cplx phase = oracle_phase(mu, nu, 1.0);
  for (int k = 0; k <= D; k += std::max(1, D / 8)) {
    FockExpansion e;
    e.coefficients.assign(static_cast<std::size_t>(k) + 1, 0.0);
    e.coefficients[k] = 1.0;
    for (double t : {-1.7, 0.0, 0.9}) {
      const double X = t * s;
      const double diff = std::abs(oracle_value(e, s, phase, X) - fock_tomogram(k, mu, nu, hbar, X)) * s;
      if (!(diff <= 1e-8)) {
        throw NumericalError("tomogram oracle calibration failed against Fock level " + std::to_string(k));
      }
    }
  }
}

}  // namespace

double tomogram_oracle_value(const FockExpansion& psi, double mu, double nu, double hbar, double X) {
  check_hbar(hbar);
  const double s = std::sqrt(hbar * frame_rho(mu, nu));
  return oracle_value(psi, s, oracle_phase(mu, nu, 1.0), X);
}

MarginalDensity tomogram_oracle(const FockExpansion& psi, double mu, double nu, double hbar,
                                const Grid& grid, Exec exec) {
  grid.validate();
  check_hbar(hbar);
  const double s = std::sqrt(hbar * frame_rho(mu, nu));
  if (psi.coefficients.empty()) throw ConfigError("empty Fock expansion");
  const double sign = calibrate_phase_sign(mu, nu, hbar);
  calibrate_moduli(psi.truncation(), mu, nu, hbar);
  const cplx phase = oracle_phase(mu, nu, sign);
  MarginalDensity d;
  d.grid = grid;
  d.values = evaluate_on_grid(grid, [&](double X) { return oracle_value(psi, s, phase, X); }, exec);
  d.meta.mu = mu;
  d.meta.nu = nu;
  d.meta.hbar = hbar;
  d.meta.pre_rescale_integral = trapezoid(grid, d.values);
  return d;
}

Moments moments(const Grid& g, std::span<const double> f) {
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = g.x(i) * f[i];
  const double mean = trapezoid(g, w);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = g.x(i) - mean;
    w[i] = d * d * f[i];
  }
  const double var = trapezoid(g, w);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(g.x(i));
    w[i] = a * a * a * f[i];
  }
  return {mean, var, trapezoid(g, w)};
}

Moments moments(const MarginalDensity& d) { return moments(d.grid, d.values); }

double fock_var_closed(int n, double mu, double nu, double hbar) {
  return hbar * (mu * mu + nu * nu) * (0.5 + n);
}

double evenodd_var_closed(cplx alpha, Parity parity, double mu, double nu, double hbar) {
  const double N = cat_normalization(alpha, parity);
  const double e = std::exp(-2.0 * std::norm(alpha));
  const double rho = mu * mu + nu * nu;
  const double a = alpha.real() * mu + alpha.imag() * nu;
  const double b = alpha.imag() * mu + alpha.real() * nu;
  const double sign = parity == Parity::even ? -1.0 : 1.0;  // the "-+" of the expression
  return N * hbar * ((1.0 + e) * rho + 4.0 * a * a + sign * 4.0 * e * b * b);
}

Abs3Bound fock_abs3_bound_check(int n, double mu, double nu, double hbar) {
  if (n < 0) throw ConfigError("Fock level must be nonnegative");
  check_hbar(hbar);
  const double scale = hbar * frame_rho(mu, nu);
  // E|y|^3 = int_0^inf t h_n(sqrt t)^2 dt; t H_n(sqrt t)^2 is a polynomial of
  // degree n+1 in t, so Gauss-Laguerre with m >= n/2 + 1 nodes is exact.
  const int m = std::min(512, std::max(32, n / 2 + 16));
  const auto rule = special::gauss_laguerre(m);
  double y_abs3 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    y_abs3 += rule.scaled_weights[i] * t * special::hermite_sq_density_factor(n, std::sqrt(t));
  }
  Abs3Bound out;
  out.abs3 = y_abs3 * std::pow(scale, 1.5);
  const double denom = (n == 0 ? 1.0 : std::pow(static_cast<double>(n), 1.5)) * std::pow(scale, 1.5);
  out.bound_ratio = out.abs3 / denom;
  return out;
}

Abs3Sup fock_abs3_sup(int nmax) {
  Abs3Sup best;
  for (int n = 1; n <= nmax; ++n) {
    const double r = fock_abs3_bound_check(n, 1.0, 0.0, 1.0).bound_ratio;
    if (r > best.sup_ratio) {
      best.sup_ratio = r;
      best.argmax = n;
    }
  }
  return best;
}

namespace {

// <bra| a^p |ket> for p = 1, 2 and <bra| a^dagger a |ket>.
cplx lower(const FockExpansion& bra, const FockExpansion& ket, int p) {
  cplx s = 0.0;
  const auto nb = bra.coefficients.size();
  for (std::size_t k = static_cast<std::size_t>(p); k < ket.coefficients.size(); ++k) {
    if (k - p >= nb) break;
    double f = 1.0;
    for (int j = 0; j < p; ++j) f *= std::sqrt(static_cast<double>(k - j));
    s += std::conj(bra.coefficients[k - p]) * f * ket.coefficients[k];
  }
  return s;
}

cplx number(const FockExpansion& bra, const FockExpansion& ket) {
  cplx s = 0.0;
  const auto n = std::min(bra.coefficients.size(), ket.coefficients.size());
  for (std::size_t k = 0; k < n; ++k) s += static_cast<double>(k) * std::conj(bra.coefficients[k]) * ket.coefficients[k];
  return s;
}

cplx overlap(const FockExpansion& bra, const FockExpansion& ket) {
  cplx s = 0.0;
  const auto n = std::min(bra.coefficients.size(), ket.coefficients.size());
  for (std::size_t k = 0; k < n; ++k) s += std::conj(bra.coefficients[k]) * ket.coefficients[k];
  return s;
}

}  // namespace

// X = sqrt(hbar/2) [(mu - i nu) a + (mu + i nu) a^dagger]
cplx matrix_element_x(const FockExpansion& bra, const FockExpansion& ket, double mu, double nu,
                      double hbar) {
  const cplx c(mu, -nu);
  const cplx a_ket = lower(bra, ket, 1);
  const cplx adag = std::conj(lower(ket, bra, 1));
  return std::sqrt(hbar / 2.0) * (c * a_ket + std::conj(c) * adag);
}

cplx matrix_element_x2(const FockExpansion& bra, const FockExpansion& ket, double mu, double nu,
                       double hbar) {
  const cplx c(mu, -nu);
  const double rho = mu * mu + nu * nu;
  const cplx a2 = lower(bra, ket, 2);
  const cplx adag2 = std::conj(lower(ket, bra, 2));
  const cplx sym = 2.0 * number(bra, ket) + overlap(bra, ket);
  return hbar / 2.0 * (c * c * a2 + std::conj(c) * std::conj(c) * adag2 + rho * sym);
}

QuadratureMoments expansion_moments(const FockExpansion& psi, double mu, double nu, double hbar) {
  const double m1 = matrix_element_x(psi, psi, mu, nu, hbar).real();
  const double m2 = matrix_element_x2(psi, psi, mu, nu, hbar).real();
  return {m1, m2 - m1 * m1};
}

namespace printed {

cplx x_diag(cplx a, double mu, double nu, double hbar) {
  return std::sqrt(2.0 * hbar) * (a.real() * mu + a.imag() * nu);
}

cplx x_cross(cplx a, double mu, double nu, double hbar) {
  return cplx(0.0, 1.0) * std::sqrt(2.0 * hbar) * std::exp(-2.0 * std::norm(a)) *
         (a.imag() * mu + a.real() * nu);
}

cplx x2_diag(cplx a, double mu, double nu, double hbar) {
  const double t = a.real() * mu + a.imag() * nu;
  return hbar / 2.0 * (mu * mu + nu * nu) + 2.0 * hbar * t * t;
}

cplx x2_cross(cplx a, double mu, double nu, double hbar) {
  const double t = a.imag() * mu + a.real() * nu;
  return std::exp(-2.0 * std::norm(a)) * (hbar / 2.0 * (mu * mu + nu * nu) - 2.0 * hbar * t * t);
}

cplx coherent_wavefunction(cplx a, double hbar, double X) {
  const cplx e = -std::norm(a) / 2.0 - X * X / (2.0 * hbar) + std::sqrt(a) * X / std::sqrt(hbar) - a * a / 2.0;
  return std::pow(pi * hbar, -0.25) * std::exp(e);
}

}  // namespace printed

cplx coherent_wavefunction(cplx a, double hbar, double X) {
  const cplx e = -std::norm(a) / 2.0 - X * X / (2.0 * hbar) + std::sqrt(2.0) * a * X / std::sqrt(hbar) - a * a / 2.0;
  return std::pow(pi * hbar, -0.25) * std::exp(e);
}

double mode_variance(const ModeSpec& mode, double mu, double nu, double hbar) {
  if (mode.is_fock()) return fock_var_closed(mode.n, mu, nu, hbar);
  return expansion_moments(fock_expansion(mode), mu, nu, hbar).var;
}

double policy_dx(const ModeSpec& mode, double mu, double nu, double hbar) {
  check_hbar(hbar);
  const double s = std::sqrt(hbar * frame_rho(mu, nu));
  const double sigma = std::sqrt(mode_variance(mode, mu, nu, hbar));
  // The density oscillates at most like h_n(y)^2, angular frequency
  // 2 sqrt(2n+1) in y; keep at least ~pi samples per radian of phase.
  const double n_eff = mode.is_fock() ? mode.n : std::ceil(std::norm(mode.alpha)) + 1.0;
  const double dx_osc = s / (2.0 * std::sqrt(2.0 * n_eff + 1.0));
  return std::min(sigma / 64.0, dx_osc);
}

Grid policy_grid(const ModeSpec& mode, double mu, double nu, double hbar) {
  const double sigma = std::sqrt(mode_variance(mode, mu, nu, hbar));
  return Grid::centered(policy_dx(mode, mu, nu, hbar), 8.0 * sigma);
}

MarginalDensity mode_marginal(const ModeSpec& mode, double mu, double nu, double hbar,
                              const Grid& grid, Exec exec) {
  switch (mode.kind) {
    case ModeKind::fock: return fock_tomogram(mode.n, mu, nu, hbar, grid, exec);
    case ModeKind::even: return evenodd_tomogram(mode.alpha, Parity::even, mu, nu, hbar, grid, exec);
    case ModeKind::odd: return evenodd_tomogram(mode.alpha, Parity::odd, mu, nu, hbar, grid, exec);
  }
  throw std::logic_error("unreachable");
}

}  // namespace cmtomo

#include <doctest.h>

#include <cmath>

#include "cmtomo/errors.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/special_functions.hpp"

using namespace cmtomo;
using special::pi;
using special::sqrt_pi;

namespace {

const cplx I(0.0, 1.0);

MarginalDensity policy_marginal(const ModeSpec& m, double mu, double nu, double hbar) {
  return mode_marginal(m, mu, nu, hbar, policy_grid(m, mu, nu, hbar));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("fock tomogram point values") {
  CHECK(fock_tomogram(0, 1.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0 / sqrt_pi).epsilon(1e-15));
  // rho = 1, hbar rho = 2, y = 1/sqrt 2: (1/sqrt 2) * 2 y^2 e^{-y^2} / sqrt(pi).
  const double direct = (1.0 / std::sqrt(2.0)) * 2.0 * 0.5 * std::exp(-0.5) / sqrt_pi;
  CHECK(direct == doctest::Approx(0.2419707245).epsilon(1e-10));
  CHECK(fock_tomogram(1, 0.6, 0.8, 2.0, 1.0) == doctest::Approx(direct).epsilon(1e-14));
  const auto e1 = fock_expansion(ModeSpec::fock(1), 4);
  CHECK(tomogram_oracle_value(e1, 0.6, 0.8, 2.0, 1.0) == doctest::Approx(direct).epsilon(1e-13));
  CHECK_THROWS_AS(fock_tomogram(0, 0.0, 0.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("fock tomogram normalization and variance for n <= 50") {
  for (int n = 0; n <= 50; ++n) {
    const auto d = policy_marginal(ModeSpec::fock(n), 1.0, 0.0, 1.0);
    const auto mo = moments(d);
    INFO("n = " << n);
    CHECK(std::abs(trapezoid(d.grid, d.values) - 1.0) < 1e-8);
    CHECK(std::abs(mo.var - fock_var_closed(n, 1.0, 0.0, 1.0)) < 1e-8 * fock_var_closed(n, 1.0, 0.0, 1.0));
    CHECK(std::abs(mo.mean) < 1e-9);
  }
}

TEST_CASE("fock tomogram depends on the frame only through hbar rho") {
  for (double X : {-1.3, 0.0, 0.4, 2.2}) {
    const double a = fock_tomogram(4, 1.0, 0.0, 2.0, X);
    CHECK(fock_tomogram(4, 0.0, 1.0, 2.0, X) == doctest::Approx(a).epsilon(1e-14));
    CHECK(fock_tomogram(4, 0.6, 0.8, 2.0, X) == doctest::Approx(a).epsilon(1e-14));
    CHECK(fock_tomogram(4, std::sqrt(2.0), 0.0, 1.0, X) == doctest::Approx(a).epsilon(1e-13));
  }
}

TEST_CASE("even cat at alpha = 0 is the vacuum tomogram") {
  const Grid g = policy_grid(ModeSpec::fock(0), 1.0, 0.0, 1.0);
  const auto cat = evenodd_tomogram(0.0, Parity::even, 1.0, 0.0, 1.0, g);
  const auto vac = fock_tomogram(0, 1.0, 0.0, 1.0, g);
  CHECK(max_abs_diff(cat.values, vac.values) < 1e-10);
  // The closed form as printed integrates to 1/N_+ = 2 here.
  CHECK(cat.meta.pre_rescale_integral == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_FALSE(cat.meta.warnings.empty());
}

TEST_CASE("closed-form cat tomograms match the Fock-expansion oracle") {
  for (double r : {0.5, 1.0, 2.0}) {
    for (cplx a : {cplx(r, 0.0), r * std::polar(1.0, pi / 4)}) {
      for (auto [mu, nu] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}}) {
        for (Parity p : {Parity::even, Parity::odd}) {
          const ModeSpec m = p == Parity::even ? ModeSpec::even(a) : ModeSpec::odd(a);
          const Grid g = policy_grid(m, mu, nu, 1.0);
          const auto closed = evenodd_tomogram(a, p, mu, nu, 1.0, g);
          const auto oracle = tomogram_oracle(fock_expansion(m), mu, nu, 1.0, g);
          INFO("alpha = " << a << ", frame = (" << mu << ", " << nu << ")");
          CHECK(max_abs_diff(closed.values, oracle.values) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("cat closed form scales with sqrt(hbar) in the inner exponent") {
  const cplx a(1.0, 0.5);
  for (double hbar : {0.3, 2.5}) {
    const auto psi = fock_expansion(ModeSpec::even(a));
    for (double X : {-1.1, 0.2, 0.9}) {
      const double c = cat_normalization(a, Parity::even) * evenodd_value(a, Parity::even, 0.6, 0.8, hbar, X);
      CHECK(c == doctest::Approx(tomogram_oracle_value(psi, 0.6, 0.8, hbar, X)).epsilon(1e-10));
    }
  }
}

TEST_CASE("even cat alpha = 2 has exact interference zeros in the momentum frame") {
  const auto psi = fock_expansion(ModeSpec::even(2.0));
  for (int k = 0; k < 4; ++k) {
    const double X = pi * (2 * k + 1) / (4.0 * std::sqrt(2.0));
    CHECK(std::abs(evenodd_value(2.0, Parity::even, 0.0, 1.0, 1.0, X)) < 1e-15);
    CHECK(std::abs(tomogram_oracle_value(psi, 0.0, 1.0, 1.0, X)) < 1e-12);
  }
}

TEST_CASE("odd cat vanishes at the origin") {
  CHECK(evenodd_value(1.5, Parity::odd, 0.0, 1.0, 1.0, 0.0) == 0.0);
  CHECK(std::abs(tomogram_oracle_value(fock_expansion(ModeSpec::odd(1.5)), 0.0, 1.0, 1.0, 0.0)) < 1e-15);
  for (auto [mu, nu] : {std::pair{1.0, 0.0}, {0.6, 0.8}}) {
    CHECK(evenodd_value(cplx(1.0, 0.3), Parity::odd, mu, nu, 1.0, 0.0) == 0.0);
  }
}

TEST_CASE("oracle calibration anchors") {
  const Grid g = policy_grid(ModeSpec::fock(3), 0.6, 0.8, 1.0);
  const auto o0 = tomogram_oracle(fock_expansion(ModeSpec::fock(0), 4), 1.0, 0.0, 1.0, g);
  CHECK(max_abs_diff(o0.values, fock_tomogram(0, 1.0, 0.0, 1.0, g).values) < 1e-10);
  const auto o3 = tomogram_oracle(fock_expansion(ModeSpec::fock(3), 4), 0.6, 0.8, 1.0, g);
  CHECK(max_abs_diff(o3.values, fock_tomogram(3, 0.6, 0.8, 1.0, g).values) < 1e-8);
}

TEST_CASE("vacuum moments") {
  const auto mo = moments(policy_marginal(ModeSpec::fock(0), 1.0, 0.0, 1.0));
  CHECK(std::abs(mo.mean) < 1e-12);
  CHECK(mo.var == doctest::Approx(0.5).epsilon(1e-10));
  // Gaussian E|X|^3 = 2 sqrt(2/pi) sigma^3 with sigma^2 = 1/2.
  CHECK(mo.abs3 == doctest::Approx(2.0 * std::sqrt(2.0 / pi) * std::pow(0.5, 1.5)).epsilon(1e-7));
  CHECK(mo.abs3 == doctest::Approx(1.0 / sqrt_pi).epsilon(1e-7));
  CHECK(moments(policy_marginal(ModeSpec::fock(1), 1.0, 0.0, 1.0)).var == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("every in-scope density has zero mean") {
  const std::vector<ModeSpec> modes{ModeSpec::fock(0), ModeSpec::fock(7), ModeSpec::even(cplx(1.0, 0.5)),
                                    ModeSpec::odd(2.0), ModeSpec::even(cplx(0.0, 1.2))};
  for (const auto& m : modes) {
    for (auto [mu, nu] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {0.6, -0.8}}) {
      CHECK(std::abs(moments(policy_marginal(m, mu, nu, 0.7)).mean) < 1e-9);
    }
  }
}

TEST_CASE("fock_var_closed") {
  CHECK(fock_var_closed(1, 0.6, 0.8, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(fock_var_closed(0, 1.0, 0.0, 1.0) == 0.5);
  CHECK(fock_var_closed(10, 1.0, 1.0, 0.1) == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("printed cat variance against quadrature") {
  // alpha = 0: the printed expression gives N_+ hbar (2 rho) = 1, the state has 0.5.
  CHECK(evenodd_var_closed(0.0, Parity::even, 1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(moments(evenodd_tomogram(0.0, Parity::even, 1.0, 0.0, 1.0, policy_grid(ModeSpec::even(0.0), 1.0, 0.0, 1.0))).var ==
        doctest::Approx(0.5).epsilon(1e-10));
  // The quadrature and the ladder-operator moments agree; the printed form does not.
  struct Case {
    cplx a;
    Parity p;
    double mu, nu;
  };
  for (const Case& c : {Case{1.0, Parity::even, 1.0, 0.0}, Case{1.0, Parity::odd, 0.0, 1.0}}) {
    const ModeSpec m = c.p == Parity::even ? ModeSpec::even(c.a) : ModeSpec::odd(c.a);
    const double quad = moments(policy_marginal(m, c.mu, c.nu, 1.0)).var;
    const double ladder = expansion_moments(fock_expansion(m), c.mu, c.nu, 1.0).var;
    CHECK(quad == doctest::Approx(ladder).epsilon(1e-9));
    const double printed = evenodd_var_closed(c.a, c.p, c.mu, c.nu, 1.0);
    CHECK(std::isfinite(printed));
    MESSAGE("alpha = " << c.a << ": printed variance " << printed << ", quadrature " << quad);
  }
}

TEST_CASE("cat variance closed form with corrected constants") {
  // N^2 hbar [(1 +- e) rho + 4 A^2 -+ 4 e B^2], A = Re a mu + Im a nu, B = Im a mu - Re a nu.
  for (cplx a : {cplx(1.0, 0.0), cplx(0.7, -0.4), cplx(0.0, 1.5)}) {
    for (Parity p : {Parity::even, Parity::odd}) {
      const double N = cat_normalization(a, p);
      const double e = std::exp(-2.0 * std::norm(a));
      const double sg = p == Parity::even ? 1.0 : -1.0;
      const double mu = 0.6, nu = 0.8, hbar = 1.3;
      const double A = a.real() * mu + a.imag() * nu;
      const double B = a.imag() * mu - a.real() * nu;
      const double var = N * N * hbar * ((1 + sg * e) * 1.0 * 2.0 + 8.0 * A * A - sg * 8.0 * e * B * B) / 2.0;
      const ModeSpec m = p == Parity::even ? ModeSpec::even(a) : ModeSpec::odd(a);
      CHECK(expansion_moments(fock_expansion(m), mu, nu, hbar).var == doctest::Approx(var).epsilon(1e-11));
    }
  }
}

TEST_CASE("coherent matrix elements from the Fock expansion") {
  for (cplx a : {cplx(0.5, 0.0), cplx(1.0, 0.5), cplx(-0.3, 1.2)}) {
    const auto plus = coherent_expansion(a);
    const auto minus = coherent_expansion(-a);
    for (auto [mu, nu] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}}) {
      const double hbar = 0.8;
      CHECK(std::abs(matrix_element_x(plus, plus, mu, nu, hbar) - printed::x_diag(a, mu, nu, hbar)) < 1e-12);
      CHECK(std::abs(matrix_element_x2(plus, plus, mu, nu, hbar) - printed::x2_diag(a, mu, nu, hbar)) < 1e-12);
      const cplx cross = I * std::sqrt(2.0 * hbar) * std::exp(-2.0 * std::norm(a)) * (a.imag() * mu - a.real() * nu);
      CHECK(std::abs(matrix_element_x(minus, plus, mu, nu, hbar) - cross) < 1e-12);
    }
  }
}

TEST_CASE("coherent wave function") {
  const cplx a(0.8, -0.3);
  const double hbar = 0.7;
  double norm = 0.0;
  double norm_printed = 0.0;
  const double h = 0.001;
  for (int i = -20000; i <= 20000; ++i) {
    norm += std::norm(coherent_wavefunction(a, hbar, i * h)) * h;
    norm_printed += std::norm(printed::coherent_wavefunction(a, hbar, i * h)) * h;
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(norm_printed - 1.0) > 1e-3);
}

TEST_CASE("abs3 bound check") {
  const auto b1 = fock_abs3_bound_check(1, 1.0, 0.0, 1.0);
  // E|y|^3 for 2y^2 e^{-y^2}/sqrt(pi): 2/sqrt(pi) int |y|^5 e^{-y^2} = 4/sqrt(pi).
  CHECK(b1.abs3 == doctest::Approx(2.0 / sqrt_pi * 2.0).epsilon(1e-13));
  CHECK(std::isfinite(b1.bound_ratio));
  for (int n : {0, 1, 4, 30}) {
    for (auto [rho_mu, hbar] : {std::pair{0.7, 0.1}, {1.4, 3.0}}) {
      const double ratio = fock_abs3_bound_check(n, rho_mu, 0.0, hbar).abs3 / fock_abs3_bound_check(n, 1.0, 0.0, 1.0).abs3;
      CHECK(ratio == doctest::Approx(std::pow(hbar * rho_mu * rho_mu, 1.5)).epsilon(1e-9));
    }
  }
  // Against trapezoid quadrature of the density.
  for (int n : {0, 3, 12}) {
    const auto mo = moments(policy_marginal(ModeSpec::fock(n), 1.0, 0.0, 1.0));
    CHECK(fock_abs3_bound_check(n, 1.0, 0.0, 1.0).abs3 == doctest::Approx(mo.abs3).epsilon(1e-6));
  }
  const auto sup = fock_abs3_sup(100);
  CHECK(sup.argmax >= 1);
  CHECK(sup.argmax <= 100);
  CHECK(std::isfinite(sup.sup_ratio));
  MESSAGE("sup_{n<=100} abs3 / (n hbar rho)^{3/2} = " << sup.sup_ratio << " at n = " << sup.argmax);
}

TEST_CASE("homogeneity of tomograms") {
  struct Fn {
    const char* name;
    double (*f)(double, double, double);
  };
  const auto fock3 = [](double X, double mu, double nu) { return fock_tomogram(3, mu, nu, 1.0, X); };
  const auto cat1 = [](double X, double mu, double nu) { return evenodd_value(1.0, Parity::even, mu, nu, 1.0, X); };
  const auto odd = [](double X, double mu, double nu) {
    return evenodd_value(cplx(0.6, 0.9), Parity::odd, mu, nu, 0.5, X);
  };
  for (const Fn& fn : {Fn{"fock3", +fock3}, Fn{"even1", +cat1}, Fn{"odd", +odd}}) {
    for (double lambda : {0.5, 2.0, -3.0}) {
      for (auto [mu, nu] : {std::pair{1.0, 0.0}, {0.6, 0.8}, {-0.2, 1.1}}) {
        for (double X : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
          INFO(fn.name << " lambda = " << lambda);
          CHECK(std::abs(fn.f(lambda * X, lambda * mu, lambda * nu) - fn.f(X, mu, nu) / std::abs(lambda)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("even cat with real alpha is even in X in the position frame") {
  for (double X : {0.1, 0.8, 2.4}) {
    CHECK(evenodd_value(1.3, Parity::even, 1.0, 0.0, 1.0, X) ==
          doctest::Approx(evenodd_value(1.3, Parity::even, 1.0, 0.0, 1.0, -X)).epsilon(1e-14));
  }
}

TEST_CASE("densities are nonnegative and normalized") {
  const std::vector<ModeSpec> modes{ModeSpec::fock(0), ModeSpec::fock(20), ModeSpec::even(cplx(2.0, 1.0)),
                                    ModeSpec::odd(0.3)};
  for (const auto& m : modes) {
    const auto d = policy_marginal(m, 0.6, 0.8, 0.4);
    for (double v : d.values) CHECK(v >= 0.0);
    CHECK(std::abs(trapezoid(d.grid, d.values) - 1.0) < 1e-8);
  }
}

TEST_CASE("grid policy covers eight standard deviations") {
  for (const auto& m : {ModeSpec::fock(5), ModeSpec::even(cplx(1.5, 0.5))}) {
    const double sigma = std::sqrt(mode_variance(m, 0.6, 0.8, 2.0));
    const Grid g = policy_grid(m, 0.6, 0.8, 2.0);
    CHECK(g.x0 <= -8.0 * sigma);
    CHECK(g.back() >= 8.0 * sigma);
    CHECK(g.dx <= sigma / 64.0);
    CHECK((g.count & (g.count - 1)) == 0);
    CHECK(g.x(g.count / 2) == 0.0);
  }
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  const Grid g = policy_grid(ModeSpec::fock(9), 1.0, 0.0, 1.0);
  CHECK(fock_tomogram(9, 1.0, 0.0, 1.0, g, Exec::serial).values == fock_tomogram(9, 1.0, 0.0, 1.0, g, Exec::parallel).values);
  const auto psi = fock_expansion(ModeSpec::even(1.0));
  CHECK(tomogram_oracle(psi, 0.6, 0.8, 1.0, g, Exec::serial).values ==
        tomogram_oracle(psi, 0.6, 0.8, 1.0, g, Exec::parallel).values);
  CHECK(evenodd_tomogram(1.0, Parity::odd, 0.6, 0.8, 1.0, g, Exec::serial).values ==
        evenodd_tomogram(1.0, Parity::odd, 0.6, 0.8, 1.0, g, Exec::parallel).values);
}

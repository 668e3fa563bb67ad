#include "cmtomo/discrepancy.hpp"

#include <cmath>
#include <limits>

#include "cmtomo/grid.hpp"
#include "cmtomo/marginals.hpp"

namespace cmtomo {

namespace {

struct Context {
  cplx alpha;
  double mu, nu, hbar;
};

DiscrepancyRow make_row(const std::string& quantity, const Context& c, const std::string& parity, double printed,
                        double oracle) {
  DiscrepancyRow r;
  r.quantity = quantity;
  r.alpha = c.alpha;
  r.parity = parity;
  r.mu = c.mu;
  r.nu = c.nu;
  r.hbar = c.hbar;
  r.printed_value = printed;
  r.oracle_value = oracle;
  r.ratio = oracle != 0.0 ? printed / oracle : std::numeric_limits<double>::quiet_NaN();
  r.abs_diff = std::abs(printed - oracle);
  r.agree = r.abs_diff <= 1e-8 * std::max(1.0, std::abs(oracle));
  return r;
}

void complex_rows(std::vector<DiscrepancyRow>& out, const std::string& quantity, const Context& c, cplx printed,
                  cplx oracle) {
  out.push_back(make_row(quantity + ".re", c, "-", printed.real(), oracle.real()));
  out.push_back(make_row(quantity + ".im", c, "-", printed.imag(), oracle.imag()));
}

}  // namespace

std::vector<DiscrepancyRow> discrepancy_report(const DiscrepancyMatrix& matrix) {
  std::vector<DiscrepancyRow> out;
  for (const cplx alpha : matrix.alphas) {
    for (const auto& [mu, nu] : matrix.frames) {
      for (const double hbar : matrix.hbars) {
        const Context c{alpha, mu, nu, hbar};
        for (const Parity p : {Parity::even, Parity::odd}) {
          if (p == Parity::odd && std::abs(alpha) == 0.0) continue;
          const std::string name = p == Parity::even ? "even" : "odd";
          const ModeSpec mode = p == Parity::even ? ModeSpec::even(alpha) : ModeSpec::odd(alpha);
          const auto psi = fock_expansion(mode);
          // A wide grid: the printed inner exponent can shift mass outward when hbar != 1.
          const Grid g = Grid::centered(policy_dx(mode, mu, nu, hbar),
                                        16.0 * std::sqrt(mode_variance(mode, mu, nu, hbar)));
          std::vector<double> printed(g.count);
          for (std::size_t i = 0; i < g.count; ++i) printed[i] = evenodd_value_printed(alpha, p, mu, nu, hbar, g.x(i));
          const auto oracle = tomogram_oracle(psi, mu, nu, hbar, g, Exec::serial);
          out.push_back(make_row("evenodd_integral", c, name, trapezoid(g, printed), trapezoid(g, oracle.values)));
          out.push_back(make_row("variance", c, name, evenodd_var_closed(alpha, p, mu, nu, hbar),
                                 expansion_moments(psi, mu, nu, hbar).var));
        }
        const auto plus = coherent_expansion(alpha);
        const auto minus = coherent_expansion(-alpha);
        complex_rows(out, "coherent_wavefunction", c, printed::coherent_wavefunction(alpha, hbar, 0.7),
                     coherent_wavefunction(alpha, hbar, 0.7));
        complex_rows(out, "x_diag", c, printed::x_diag(alpha, mu, nu, hbar), matrix_element_x(plus, plus, mu, nu, hbar));
        complex_rows(out, "x_cross", c, printed::x_cross(alpha, mu, nu, hbar),
                     matrix_element_x(minus, plus, mu, nu, hbar));
        complex_rows(out, "x2_diag", c, printed::x2_diag(alpha, mu, nu, hbar),
                     matrix_element_x2(plus, plus, mu, nu, hbar));
        complex_rows(out, "x2_cross", c, printed::x2_cross(alpha, mu, nu, hbar),
                     matrix_element_x2(minus, plus, mu, nu, hbar));
      }
    }
  }
  return out;
}

}  // namespace cmtomo

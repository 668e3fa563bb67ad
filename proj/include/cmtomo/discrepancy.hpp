#pragma once

#include <string>
#include <vector>

#include "cmtomo/states.hpp"

namespace cmtomo {

/// One printed closed form evaluated next to its independently computed value.
struct DiscrepancyRow {
  std::string quantity;   ///< e.g. "evenodd_integral", "variance", "x_cross.im"
  cplx alpha = 0.0;
  std::string parity;     ///< "even", "odd" or "-" when parity does not enter
  double mu = 1.0;
  double nu = 0.0;
  double hbar = 1.0;
  double printed_value = 0.0;
  double oracle_value = 0.0;
  double ratio = 0.0;     ///< printed / oracle; NaN when the oracle value is 0
  double abs_diff = 0.0;
  bool agree = false;     ///< abs_diff <= 1e-8 max(1, |oracle|)
};

struct DiscrepancyMatrix {
  std::vector<cplx> alphas{0.0, 0.5, 1.0, cplx(1.0, 0.5), cplx(0.0, 1.5)};
  std::vector<std::pair<double, double>> frames{{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}};
  std::vector<double> hbars{1.0, 0.5};
};

/// Rows for every (alpha, frame, hbar) of the matrix: the closed-form
/// even/odd tomogram integral, the even/odd variance, the coherent
/// wave function at X = 0.7, and the diagonal and cross matrix elements of
/// X and X^2 (real and imaginary parts as separate rows). Odd rows are
/// omitted only at alpha = 0 where the odd state does not exist.
std::vector<DiscrepancyRow> discrepancy_report(const DiscrepancyMatrix& matrix = {});

}  // namespace cmtomo

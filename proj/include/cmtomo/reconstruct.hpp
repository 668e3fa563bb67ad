#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cmtomo/parallel.hpp"
#include "cmtomo/states.hpp"

namespace cmtomo {

/// Dense square complex matrix, row-major.
struct ComplexMatrix {
  int dim = 0;
  std::vector<cplx> entries;

  static ComplexMatrix zero(int dim);
  cplx& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * dim + j]; }
  const cplx& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * dim + j]; }
  cplx trace() const;
};

using DensityMatrix = ComplexMatrix;

struct QuadratureMatrices {
  ComplexMatrix Q;
  ComplexMatrix P;
};

/// Truncated position and momentum matrices in the Fock basis:
/// Q_{k,k+1} = Q_{k+1,k} = sqrt(hbar (k+1)/2), P_{k,k+1} = -P_{k+1,k} = -i sqrt(hbar (k+1)/2).
QuadratureMatrices quadrature_matrices(int dim, double hbar);

/// Tomogram w(X, mu, nu) as a callable.
using TomogramFn = std::function<double(double X, double mu, double nu)>;

/// Unit-normalized tomogram of a mode at the given hbar (Fock closed form,
/// or the even/odd closed form with its constant fixed analytically).
TomogramFn mode_tomogram(const ModeSpec& mode, double hbar);

struct ReconstructOptions {
  double K = 0.0;            ///< frame radius cutoff; 0 selects 8/sqrt(hbar) + 2 sigma_max/hbar
  int theta_steps = 64;      ///< trapezoid nodes on [0, 2 pi)
  int k_panels = 16;         ///< 30-point Gauss-Legendre panels on (0, K]
  int x_steps = 512;         ///< X nodes over +-10 sigma at each angle
  int padding = 128;         ///< extra Fock levels when exponentiating Q
};

struct Reconstruction {
  DensityMatrix rho;          ///< Hermitian part, trace rescaled to one
  DensityMatrix raw;          ///< the quadrature result before symmetrizing and rescaling
  double pre_rescale_trace = 0.0;
  double K = 0.0;             ///< cutoff actually used
  double min_eigenvalue = 0.0;
  bool leakage = false;       ///< |pre_rescale_trace - 1| > 5%
  std::vector<std::string> warnings;
};

/// rho = (hbar/2pi) int dmu dnu [int w(X; mu, nu) e^{iX} dX] exp(-i(mu Q + nu P)),
/// in polar frame coordinates (k, theta). Homogeneity turns the X integral
/// into the characteristic function of the unit-frame tomogram at k, so w is
/// sampled once per angle. exp(-ik(cos t Q + sin t P)) = R(t) exp(-ikQ) R(t)^dagger
/// with R(t) = diag(e^{i t m}); exp(-ikQ) comes from one eigendecomposition of
/// Q truncated at dim + padding levels. Per-k partial sums are combined
/// pairwise in a fixed order, so the result does not depend on thread count.
Reconstruction reconstruct_single_mode(const TomogramFn& w, int dim, double hbar,
                                       const ReconstructOptions& options = {}, Exec exec = Exec::parallel);

/// <psi|rho|psi> over the common levels.
double fidelity(const DensityMatrix& rho, const FockExpansion& psi);

/// max |M_ij - conj(M_ji)|
double hermiticity_error(const ComplexMatrix& m);
/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace cmtomo

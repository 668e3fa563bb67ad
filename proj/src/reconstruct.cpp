#include "cmtomo/reconstruct.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

#include "cmtomo/errors.hpp"
#include "cmtomo/grid.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/special_functions.hpp"

namespace cmtomo {

using special::pi;

ComplexMatrix ComplexMatrix::zero(int dim) {
  ComplexMatrix m;
  m.dim = dim;
  m.entries.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < dim; ++i) t += (*this)(i, i);
  return t;
}

QuadratureMatrices quadrature_matrices(int dim, double hbar) {
  if (dim < 2) throw ConfigError("quadrature matrices need dim >= 2");
  if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
  QuadratureMatrices qp{ComplexMatrix::zero(dim), ComplexMatrix::zero(dim)};
  for (int k = 0; k + 1 < dim; ++k) {
    const double a = std::sqrt(hbar * (k + 1) / 2.0);
    qp.Q(k, k + 1) = a;
    qp.Q(k + 1, k) = a;
    qp.P(k, k + 1) = cplx(0.0, -a);
    qp.P(k + 1, k) = cplx(0.0, a);
  }
  return qp;
}

TomogramFn mode_tomogram(const ModeSpec& mode, double hbar) {
  mode.validate();
  switch (mode.kind) {
    case ModeKind::fock:
      return [n = mode.n, hbar](double X, double mu, double nu) { return fock_tomogram(n, mu, nu, hbar, X); };
    case ModeKind::even:
    case ModeKind::odd: {
      const Parity p = mode.kind == ModeKind::even ? Parity::even : Parity::odd;
      // The closed form integrates to 1/N; multiplying by N normalizes it exactly.
      const double c = cat_normalization(mode.alpha, p);
      return [alpha = mode.alpha, p, c, hbar](double X, double mu, double nu) {
        return c * evenodd_value(alpha, p, mu, nu, hbar, X);
      };
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

using MatX = Eigen::MatrixXcd;

// Unit-frame tomogram at one angle, on a grid sized from its own spread.
struct AngleSamples {
  Grid grid;
  std::vector<double> values;
  double sigma = 0.0;
};

AngleSamples sample_angle(const TomogramFn& w, double theta, int dim, double hbar, int x_steps) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double wide = 6.0 * std::sqrt(hbar * (2.0 * dim + 1.0));
  const std::size_t n0 = 4096;
  const Grid g0{-wide, 2.0 * wide / static_cast<double>(n0 - 1), n0};
  std::vector<double> f0(n0);
  for (std::size_t i = 0; i < n0; ++i) f0[i] = w(g0.x(i), c, s);
  const auto mo = moments(g0, f0);
  const double sigma = std::sqrt(std::max(mo.var, 1e-300));
  const double half = 10.0 * sigma;
  AngleSamples a;
  a.sigma = sigma;
  a.grid = Grid{mo.mean - half, 2.0 * half / static_cast<double>(x_steps - 1), static_cast<std::size_t>(x_steps)};
  a.values.resize(a.grid.count);
  for (std::size_t i = 0; i < a.grid.count; ++i) a.values[i] = w(a.grid.x(i), c, s);
  return a;
}

// Trapezoid int w(Y) e^{ikY} dY.
cplx angle_cf(const AngleSamples& a, double k) {
  const cplx step = std::polar(1.0, k * a.grid.dx);
  cplx ph = std::polar(1.0, k * a.grid.x0);
  cplx sum = 0.0;
  const std::size_t n = a.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double wt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    sum += wt * a.values[i] * ph;
    ph *= step;
  }
  return sum * a.grid.dx;
}

MatX pairwise_sum(std::vector<MatX>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(parts, lo, mid) + pairwise_sum(parts, mid, hi);
}

MatX to_eigen(const ComplexMatrix& m) {
  MatX e(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) e(i, j) = m(i, j);
  return e;
}

ComplexMatrix from_eigen(const MatX& e) {
  auto m = ComplexMatrix::zero(static_cast<int>(e.rows()));
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) m(i, j) = e(i, j);
  return m;
}

}  // namespace

Reconstruction reconstruct_single_mode(const TomogramFn& w, int dim, double hbar, const ReconstructOptions& options,
                                       Exec exec) {
  if (dim < 2) throw ConfigError("reconstruction needs dim >= 2");
  if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (options.theta_steps < 1 || options.k_panels < 1 || options.x_steps < 3 || options.padding < 0)
    throw ConfigError("reconstruction grid steps must be positive");
  const int nt = options.theta_steps;

  // exp(-ik Q) on the enlarged truncation; only the leading dim x dim block is kept.
  const int L = dim + options.padding;
  Eigen::MatrixXd QL = Eigen::MatrixXd::Zero(L, L);
  for (int k = 0; k + 1 < L; ++k) QL(k, k + 1) = QL(k + 1, k) = std::sqrt(hbar * (k + 1) / 2.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(QL);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of Q failed");
  const Eigen::MatrixXd Vb = eig.eigenvectors().topRows(dim);
  const Eigen::VectorXd lambda = eig.eigenvalues();

  std::vector<AngleSamples> angles(static_cast<std::size_t>(nt));
  const auto sample = [&](std::ptrdiff_t t) {
    angles[static_cast<std::size_t>(t)] = sample_angle(w, 2.0 * pi * static_cast<double>(t) / nt, dim, hbar, options.x_steps);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < nt; ++t) sample(t);
  } else {
    for (std::ptrdiff_t t = 0; t < nt; ++t) sample(t);
  }

  // Interference between separated components puts characteristic-function
  // mass near k ~ 2 sigma / hbar; the default cutoff reaches 8/sqrt(hbar) past it.
  double sigma_max = 0.0;
  for (const auto& a : angles) sigma_max = std::max(sigma_max, a.sigma);
  const double K = options.K > 0.0 ? options.K : 8.0 / std::sqrt(hbar) + 2.0 * sigma_max / hbar;

  // Gauss-Legendre nodes on (0, K].
  using GL = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> knodes;
  std::vector<double> kweights;
  const double width = K / options.k_panels;
  for (int p = 0; p < options.k_panels; ++p) {
    const double mid = (p + 0.5) * width;
    const auto& ab = GL::abscissa();
    const auto& wt = GL::weights();
    for (std::size_t j = 0; j < ab.size(); ++j) {
      const double h = 0.5 * width;
      if (ab[j] == 0.0) {
        knodes.push_back(mid);
        kweights.push_back(h * wt[j]);
        continue;
      }
      knodes.push_back(mid - h * ab[j]);
      kweights.push_back(h * wt[j]);
      knodes.push_back(mid + h * ab[j]);
      kweights.push_back(h * wt[j]);
    }
  }

  const auto nk = static_cast<std::ptrdiff_t>(knodes.size());
  std::vector<MatX> parts(knodes.size());
  const double dtheta = 2.0 * pi / nt;
  const auto contribution = [&](std::ptrdiff_t j) {
    const double k = knodes[static_cast<std::size_t>(j)];
    // G(d) = sum_theta C(k, theta) e^{i theta d}, d = m - n.
    std::vector<cplx> C(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) C[static_cast<std::size_t>(t)] = angle_cf(angles[static_cast<std::size_t>(t)], k);
    std::vector<cplx> G(static_cast<std::size_t>(2 * dim - 1));
    for (int d = -(dim - 1); d <= dim - 1; ++d) {
      cplx s = 0.0;
      for (int t = 0; t < nt; ++t) s += C[static_cast<std::size_t>(t)] * std::polar(1.0, dtheta * t * d);
      G[static_cast<std::size_t>(d + dim - 1)] = s * dtheta;
    }
    Eigen::VectorXcd phase(L);
    for (int i = 0; i < L; ++i) phase(i) = std::polar(1.0, -k * lambda(i));
    const MatX E = Vb.cast<cplx>() * phase.asDiagonal() * Vb.transpose().cast<cplx>();
    MatX part(dim, dim);
    const double scale = hbar / (2.0 * pi) * k * kweights[static_cast<std::size_t>(j)];
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) part(m, n) = scale * E(m, n) * G[static_cast<std::size_t>(m - n + dim - 1)];
    parts[static_cast<std::size_t>(j)] = std::move(part);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < nk; ++j) contribution(j);
  } else {
    for (std::ptrdiff_t j = 0; j < nk; ++j) contribution(j);
  }
  const MatX raw = pairwise_sum(parts, 0, parts.size());

  Reconstruction r;
  r.K = K;
  r.raw = from_eigen(raw);
  MatX herm = 0.5 * (raw + raw.adjoint());
  r.pre_rescale_trace = herm.trace().real();
  if (!(std::abs(r.pre_rescale_trace) > 0.0)) throw NumericalError("reconstructed trace is zero");
  herm /= r.pre_rescale_trace;
  r.rho = from_eigen(herm);
  r.min_eigenvalue = min_eigenvalue(r.rho);
  if (std::abs(r.pre_rescale_trace - 1.0) > 0.05) {
    r.leakage = true;
    std::ostringstream os;
    os.precision(10);
    os << "truncation leakage: trace before rescale " << r.pre_rescale_trace << " at dim " << dim;
    r.warnings.push_back(os.str());
  }
  return r;
}

double fidelity(const DensityMatrix& rho, const FockExpansion& psi) {
  const int n = std::min(rho.dim, static_cast<int>(psi.coefficients.size()));
  cplx f = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f += std::conj(psi.coefficients[i]) * rho(i, j) * psi.coefficients[j];
  return f.real();
}

double hermiticity_error(const ComplexMatrix& m) {
  double e = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) e = std::max(e, std::abs(m(i, j) - std::conj(m(j, i))));
  return e;
}

double min_eigenvalue(const ComplexMatrix& m) {
  const MatX e = to_eigen(m);
  const MatX h = 0.5 * (e + e.adjoint());
  const Eigen::SelfAdjointEigenSolver<MatX> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace cmtomo

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cmtomo/grid.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/parallel.hpp"
#include "cmtomo/states.hpp"

namespace cmtomo {

struct CenterOfMassMeta {
  std::string system_digest;
  std::string frame_digest;
  std::string backend;  ///< "fft" or "cf"
  double clamped_mass = 0.0;
};

/// Density of s_N = sum_i (mu_i q_i + nu_i p_i) for a product state.
struct CenterOfMassDensity {
  Grid grid;
  std::vector<double> values;
  CenterOfMassMeta meta;
};

struct ConvolutionOptions {
  std::size_t max_points = max_grid_points;
  /// Negative ringing mass allowed before the run fails.
  double clamp_tolerance = 1e-9;
};

/// Output grid for the sum: spacing = finest marginal spacing, covering
/// sum of means +- 8 sqrt(sum of variances).
Grid common_output_grid(std::span<const MarginalDensity> marginals,
                        std::size_t max_points = max_grid_points);

/// N-fold convolution through FFTs on a zero-padded periodic grid. Marginals
/// whose grid is not aligned to the common spacing are resampled by linear
/// interpolation. Negative ringing is clamped; the clamped mass is reported
/// and must stay below options.clamp_tolerance. Exec::parallel runs the
/// per-marginal transforms concurrently; results are identical either way.
CenterOfMassDensity convolve_fft(std::span<const MarginalDensity> marginals,
                                 const ConvolutionOptions& options = {}, Exec exec = Exec::parallel);

/// Trapezoid characteristic function int e^{ikX} w(X) dX on the density's own grid.
cplx characteristic_function(const MarginalDensity& d, double k);

/// k grid matched to the periodic window convolve_fft uses for the same
/// marginals: dk = 2 pi / (M dx), M points centred on k = 0.
Grid default_k_grid(std::span<const MarginalDensity> marginals,
                    std::size_t max_points = max_grid_points);

/// Product of per-marginal characteristic functions on k_grid, inverted by
/// direct quadrature onto the common output grid. Uses no FFT.
CenterOfMassDensity cf_product(std::span<const MarginalDensity> marginals, const Grid& k_grid,
                               const ConvolutionOptions& options = {}, Exec exec = Exec::parallel);

/// Marginals for every mode of the system on one shared, aligned spacing.
std::vector<MarginalDensity> build_marginals(const SystemSpec& sys, const FrameSpec& frame,
                                             Exec exec = Exec::parallel);

/// Monte-Carlo draws of s_N: each mode sampled by inverse CDF from its
/// marginal (cumulative trapezoid, linear inverse). Mode j, block b uses its
/// own generator seeded from (seed, j, b), so the output depends only on the
/// seed and never on the thread count.
std::vector<double> sample_sum(std::span<const MarginalDensity> marginals, std::size_t n_samples,
                               std::uint64_t seed, Exec exec = Exec::parallel);
std::vector<double> sample_sum(const SystemSpec& sys, const FrameSpec& frame, std::size_t n_samples,
                               std::uint64_t seed, Exec exec = Exec::parallel);

/// 1/2 int |a - b|, with b interpolated onto a's grid.
double total_variation(const CenterOfMassDensity& a, const CenterOfMassDensity& b);
/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and
/// the density's CDF. Sorts a copy of the samples.
double ks_statistic(std::span<const double> samples, const Grid& g, std::span<const double> density);
/// 1/2 sum |p_hist - p_density| over `bins` equal bins spanning the central
/// 99.99% of the density's mass.
double histogram_tv(std::span<const double> samples, const Grid& g, std::span<const double> density,
                    std::size_t bins = 100);

std::string digest(const SystemSpec& sys);
std::string digest(const FrameSpec& frame);
std::uint64_t fnv1a(std::string_view text);

}  // namespace cmtomo

#include "cmtomo/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>

#include "cmtomo/errors.hpp"
#include "cmtomo/special_functions.hpp"

namespace cmtomo {

namespace {

using special::pi;

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    std::vector<double> in(n);
    std::vector<cplx> out(n / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                    reinterpret_cast<fftw_complex*>(out.data()), flags);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(out.data()),
                                     in.data(), flags);
    if (forward_ == nullptr || backward_ == nullptr) throw NumericalError("FFTW planning failed");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  std::vector<cplx> forward(std::vector<double> in) const {
    std::vector<cplx> out(n_ / 2 + 1);
    fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }
  /// Unnormalized inverse (FFTW convention); destroys `in`.
  std::vector<double> backward(std::vector<cplx> in) const {
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    return out;
  }

 private:
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Samples of a marginal on the lattice x = k*dx, k = offset .. offset+size-1.
struct Aligned {
  long long offset = 0;
  std::vector<double> values;
};

Aligned align(const MarginalDensity& m, double dx) {
  const double start = m.grid.x0 / dx;
  const double rounded = std::round(start);
  if (std::abs(m.grid.dx - dx) <= 1e-12 * dx && std::abs(start - rounded) <= 1e-9) {
    return {static_cast<long long>(rounded), m.values};
  }
  const auto lo = static_cast<long long>(std::floor(m.grid.x0 / dx));
  const auto hi = static_cast<long long>(std::ceil(m.grid.back() / dx));
  Aligned a;
  a.offset = lo;
  a.values.resize(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    a.values[i] = interpolate(m.grid, m.values, static_cast<double>(lo + static_cast<long long>(i)) * dx);
  }
  return a;
}

double finest_dx(std::span<const MarginalDensity> marginals) {
  if (marginals.empty()) throw ConfigError("convolution needs at least one marginal");
  double dx = marginals[0].grid.dx;
  for (const auto& m : marginals) dx = std::min(dx, m.grid.dx);
  return dx;
}

std::size_t periodic_length(std::span<const MarginalDensity> marginals, const Grid& out,
                            std::size_t max_points) {
  std::size_t longest = 0;
  const double dx = out.dx;
  for (const auto& m : marginals) {
    const double span_cells = (m.grid.back() - m.grid.x0) / dx + 2.0;
    longest = std::max(longest, static_cast<std::size_t>(span_cells));
  }
  const std::size_t M = next_pow2(std::max(2 * out.count, longest));
  if (M > max_points) {
    throw NumericalError("convolution: periodic grid of " + std::to_string(M) +
                         " points exceeds the maximum of " + std::to_string(max_points));
  }
  return M;
}

// Clamp negatives, check the clamped mass, renormalize.
double finalize(const Grid& g, std::vector<double>& v, double tolerance) {
  double clamped = 0.0;
  for (auto& x : v) {
    if (x < 0.0) {
      clamped -= x;
      x = 0.0;
    }
  }
  clamped *= g.dx;
  if (clamped > tolerance) {
    std::ostringstream os;
    os << "convolution: clamped negative mass " << clamped << " exceeds " << tolerance;
    throw NumericalError(os.str());
  }
  const double total = trapezoid(g, v);
  if (!(total > 0.0)) throw NumericalError("convolution: result has zero mass on the output grid");
  for (auto& x : v) x /= total;
  return clamped;
}

std::string meta_digest(std::span<const MarginalDensity> marginals, bool frame) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& m : marginals) {
    if (frame) {
      os << m.meta.mu << ',' << m.meta.nu << ';';
    } else {
      os << m.meta.mode.describe() << ';' << m.meta.hbar << ';';
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(const SystemSpec& sys) {
  std::ostringstream os;
  os.precision(17);
  os << "hbar=" << sys.hbar;
  for (const auto& m : sys.modes) os << ";" << m.describe();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

std::string digest(const FrameSpec& frame) {
  std::ostringstream os;
  os.precision(17);
  os << "r=" << frame.r << ";R=" << frame.R;
  for (std::size_t i = 0; i < frame.mu.size(); ++i) os << ";" << frame.mu[i] << "," << frame.nu[i];
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

Grid common_output_grid(std::span<const MarginalDensity> marginals, std::size_t max_points) {
  const double dx = finest_dx(marginals);
  double mean = 0.0;
  double var = 0.0;
  for (const auto& m : marginals) {
    const auto mo = moments(m);
    mean += mo.mean;
    var += mo.var;
  }
  const Grid g = Grid::centered(dx, std::abs(mean) + 8.0 * std::sqrt(var));
  if (g.count > max_points) {
    throw NumericalError("convolution: output grid of " + std::to_string(g.count) +
                         " points exceeds the maximum of " + std::to_string(max_points));
  }
  return g;
}

CenterOfMassDensity convolve_fft(std::span<const MarginalDensity> marginals,
                                 const ConvolutionOptions& options, Exec exec) {
  const Grid out = common_output_grid(marginals, options.max_points);
  const std::size_t M = periodic_length(marginals, out, options.max_points);
  const double dx = out.dx;
  const RealFft fft(M);

  const auto n = static_cast<std::ptrdiff_t>(marginals.size());
  std::vector<std::vector<cplx>> spectra(marginals.size());
  std::vector<long long> offsets(marginals.size());
  const auto transform = [&](std::ptrdiff_t i) {
    Aligned a = align(marginals[static_cast<std::size_t>(i)], dx);
    std::vector<double> buf(M, 0.0);
    std::copy(a.values.begin(), a.values.end(), buf.begin());
    offsets[static_cast<std::size_t>(i)] = a.offset;
    spectra[static_cast<std::size_t>(i)] = fft.forward(std::move(buf));
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) transform(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) transform(i);
  }

  std::vector<cplx> product = spectra[0];
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    for (std::size_t k = 0; k < product.size(); ++k) product[k] *= spectra[i][k];
  }
  long long total_offset = 0;
  for (auto o : offsets) total_offset += o;

  const std::vector<double> circ = fft.backward(std::move(product));
  // Each product of spectra carries one factor dx per extra convolution.
  const double norm = std::pow(dx, static_cast<double>(marginals.size() - 1)) / static_cast<double>(M);
  const auto out_offset = static_cast<long long>(std::llround(out.x0 / dx));
  const auto Ml = static_cast<long long>(M);

  CenterOfMassDensity res;
  res.grid = out;
  res.values.resize(out.count);
  for (std::size_t j = 0; j < out.count; ++j) {
    long long p = (out_offset + static_cast<long long>(j) - total_offset) % Ml;
    if (p < 0) p += Ml;
    res.values[j] = circ[static_cast<std::size_t>(p)] * norm;
  }
  res.meta.clamped_mass = finalize(out, res.values, options.clamp_tolerance);
  res.meta.backend = "fft";
  res.meta.system_digest = meta_digest(marginals, false);
  res.meta.frame_digest = meta_digest(marginals, true);
  return res;
}

cplx characteristic_function(const MarginalDensity& d, double k) {
  const auto& g = d.grid;
  const cplx step = std::polar(1.0, k * g.dx);
  cplx ph = std::polar(1.0, k * g.x0);
  cplx s = 0.0;
  const std::size_t n = d.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w * d.values[i] * ph;
    ph *= step;
  }
  return s * g.dx;
}

Grid default_k_grid(std::span<const MarginalDensity> marginals, std::size_t max_points) {
  const Grid out = common_output_grid(marginals, max_points);
  const std::size_t M = periodic_length(marginals, out, max_points);
  const double dk = 2.0 * pi / (static_cast<double>(M) * out.dx);
  return Grid{-static_cast<double>(M / 2) * dk, dk, M};
}

CenterOfMassDensity cf_product(std::span<const MarginalDensity> marginals, const Grid& k_grid,
                               const ConvolutionOptions& options, Exec exec) {
  k_grid.validate();
  const Grid out = common_output_grid(marginals, options.max_points);
  const auto K = static_cast<std::ptrdiff_t>(k_grid.count);

  std::vector<cplx> phi(k_grid.count, 1.0);
  const auto cf_at = [&](std::ptrdiff_t j) {
    const double k = k_grid.x(static_cast<std::size_t>(j));
    cplx p = 1.0;
    for (const auto& m : marginals) p *= characteristic_function(m, k);
    phi[static_cast<std::size_t>(j)] = p;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < K; ++j) cf_at(j);
  } else {
    for (std::ptrdiff_t j = 0; j < K; ++j) cf_at(j);
  }

  // f(X) = (1/2pi) int e^{-ikX} Phi(k) dk, trapezoid in k.
  CenterOfMassDensity res;
  res.grid = out;
  res.values.resize(out.count);
  const auto n_out = static_cast<std::ptrdiff_t>(out.count);
  const auto invert = [&](std::ptrdiff_t i) {
    const double X = out.x(static_cast<std::size_t>(i));
    const cplx step = std::polar(1.0, -k_grid.dx * X);
    cplx ph = std::polar(1.0, -k_grid.x0 * X);
    double s = 0.0;
    for (std::ptrdiff_t j = 0; j < K; ++j) {
      const double w = (j == 0 || j + 1 == K) ? 0.5 : 1.0;
      s += w * std::real(phi[static_cast<std::size_t>(j)] * ph);
      ph *= step;
    }
    res.values[static_cast<std::size_t>(i)] = s * k_grid.dx / (2.0 * pi);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n_out; ++i) invert(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n_out; ++i) invert(i);
  }
  res.meta.clamped_mass = finalize(out, res.values, options.clamp_tolerance);
  res.meta.backend = "cf";
  res.meta.system_digest = meta_digest(marginals, false);
  res.meta.frame_digest = meta_digest(marginals, true);
  return res;
}

std::vector<MarginalDensity> build_marginals(const SystemSpec& sys, const FrameSpec& frame, Exec exec) {
  sys.validate();
  frame.validate(sys.modes.size());
  double dx = INFINITY;
  for (std::size_t i = 0; i < sys.modes.size(); ++i) {
    dx = std::min(dx, policy_dx(sys.modes[i], frame.mu[i], frame.nu[i], sys.hbar));
  }
  std::vector<MarginalDensity> out;
  out.reserve(sys.modes.size());
  for (std::size_t i = 0; i < sys.modes.size(); ++i) {
    // Identical modes in identical frames share one evaluation.
    bool reused = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (sys.modes[j] == sys.modes[i] && frame.mu[j] == frame.mu[i] && frame.nu[j] == frame.nu[i]) {
        out.push_back(out[j]);
        reused = true;
        break;
      }
    }
    if (reused) continue;
    const double sigma = std::sqrt(mode_variance(sys.modes[i], frame.mu[i], frame.nu[i], sys.hbar));
    const Grid g = Grid::centered(dx, 8.0 * sigma);
    out.push_back(mode_marginal(sys.modes[i], frame.mu[i], frame.nu[i], sys.hbar, g, exec));
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t sample_block = 4096;

struct InverseCdf {
  const Grid* grid;
  std::vector<double> cdf;

  double operator()(double u) const {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.begin()) return grid->x0;
    if (it == cdf.end()) return grid->back();
    const auto i = static_cast<std::size_t>(it - cdf.begin()) - 1;
    const double width = cdf[i + 1] - cdf[i];
    const double t = width > 0.0 ? (target - cdf[i]) / width : 0.0;
    return grid->x(i) + t * grid->dx;
  }
};

}  // namespace

std::vector<double> sample_sum(std::span<const MarginalDensity> marginals, std::size_t n_samples,
                               std::uint64_t seed, Exec exec) {
  std::vector<double> sums(n_samples, 0.0);
  const auto blocks = static_cast<std::ptrdiff_t>((n_samples + sample_block - 1) / sample_block);
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    const InverseCdf inv{&marginals[j].grid, cumulative_trapezoid(marginals[j].grid, marginals[j].values)};
    const std::uint64_t mode_seed = splitmix64(seed ^ splitmix64(j + 1));
    const auto draw_block = [&](std::ptrdiff_t b) {
      std::mt19937_64 rng(splitmix64(mode_seed + static_cast<std::uint64_t>(b)));
      const std::size_t lo = static_cast<std::size_t>(b) * sample_block;
      const std::size_t hi = std::min(n_samples, lo + sample_block);
      for (std::size_t i = lo; i < hi; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        sums[i] += inv(u);
      }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t b = 0; b < blocks; ++b) draw_block(b);
    } else {
      for (std::ptrdiff_t b = 0; b < blocks; ++b) draw_block(b);
    }
  }
  return sums;
}

std::vector<double> sample_sum(const SystemSpec& sys, const FrameSpec& frame, std::size_t n_samples,
                               std::uint64_t seed, Exec exec) {
  const auto marginals = build_marginals(sys, frame, exec);
  return sample_sum(marginals, n_samples, seed, exec);
}

double total_variation(const CenterOfMassDensity& a, const CenterOfMassDensity& b) {
  std::vector<double> diff(a.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = std::abs(a.values[i] - interpolate(b.grid, b.values, a.grid.x(i)));
  }
  return 0.5 * trapezoid(a.grid, diff);
}

double ks_statistic(std::span<const double> samples, const Grid& g, std::span<const double> density) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const auto cdf = cumulative_trapezoid(g, density);
  const double total = cdf.back();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double F;
    if (s[i] <= g.x0) {
      F = 0.0;
    } else if (s[i] >= g.back()) {
      F = 1.0;
    } else {
      F = interpolate(g, cdf, s[i]) / total;
    }
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - F), std::abs(F - static_cast<double>(i) / n)});
  }
  return d;
}

double histogram_tv(std::span<const double> samples, const Grid& g, std::span<const double> density,
                    std::size_t bins) {
  const auto cdf = cumulative_trapezoid(g, density);
  const double total = cdf.back();
  // Central range holding all but 1e-4 of the mass.
  double lo = g.x0;
  double hi = g.back();
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (cdf[i] / total >= 0.5e-4) {
      lo = g.x(i);
      break;
    }
  }
  for (std::size_t i = cdf.size(); i-- > 0;) {
    if (cdf[i] / total <= 1.0 - 0.5e-4) {
      hi = g.x(i);
      break;
    }
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> counts(bins + 2, 0.0);  // underflow, bins, overflow
  for (double x : samples) {
    std::size_t idx;
    if (x < lo) {
      idx = 0;
    } else if (x >= hi) {
      idx = bins + 1;
    } else {
      idx = 1 + std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
    }
    counts[idx] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  const auto F = [&](double x) { return interpolate(g, cdf, x) / total; };
  double tv = std::abs(counts[0] / n - F(lo)) + std::abs(counts[bins + 1] / n - (1.0 - F(hi)));
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + static_cast<double>(b) * width;
    const double p = F(a + width) - F(a);
    tv += std::abs(counts[b + 1] / n - p);
  }
  return 0.5 * tv;
}

}  // namespace cmtomo

#include "cmtomo/clt.hpp"

#include <algorithm>
#include <cmath>

#include "cmtomo/errors.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/special_functions.hpp"

namespace cmtomo {

namespace {

Parity parity_of(const ModeSpec& m) { return m.kind == ModeKind::odd ? Parity::odd : Parity::even; }

// hbar-free part of E|x|^3 for Fock level n at hbar rho = 1.
double unit_abs3(int n) { return fock_abs3_bound_check(n, 1.0, 0.0, 1.0).abs3; }

// Cumulative trapezoid with the Euler-Maclaurin end correction, O(dx^4).
std::vector<double> corrected_cdf(const Grid& g, std::span<const double> f) {
  auto F = cumulative_trapezoid(g, f);
  const std::size_t n = f.size();
  if (n < 3) return F;
  const auto deriv = [&](std::size_t i) {
    if (i == 0) return (f[1] - f[0]) / g.dx;
    if (i + 1 == n) return (f[n - 1] - f[n - 2]) / g.dx;
    return (f[i + 1] - f[i - 1]) / (2.0 * g.dx);
  };
  const double d0 = deriv(0);
  const double c = g.dx * g.dx / 12.0;
  for (std::size_t i = 1; i < n; ++i) F[i] -= c * (deriv(i) - d0);
  return F;
}

SystemSpec prefix_system(const std::vector<ModeSpec>& schedule, int N, double hbar) {
  SystemSpec s;
  s.hbar = hbar;
  for (int i = 0; i < N; ++i) s.modes.push_back(schedule[static_cast<std::size_t>(i) % schedule.size()]);
  return s;
}

FrameSpec prefix_frame(const FrameSpec& schedule, int N) {
  FrameSpec f;
  f.r = schedule.r;
  f.R = schedule.R;
  for (int i = 0; i < N; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) % schedule.mu.size();
    f.mu.push_back(schedule.mu[j]);
    f.nu.push_back(schedule.nu[j]);
  }
  return f;
}

}  // namespace

double lyapunov_ratio(std::span<const ModeMoments> per_mode) {
  double a = 0.0;
  double v = 0.0;
  for (const auto& m : per_mode) {
    if (!(m.var > 0.0)) throw NumericalError("Lyapunov ratio needs positive variances");
    a += m.abs3;
    v += m.var;
  }
  return a / std::pow(v, 1.5);
}

std::vector<ModeMoments> mode_moments(const SystemSpec& sys, const FrameSpec& frame) {
  sys.validate();
  frame.validate(sys.modes.size());
  std::vector<ModeMoments> out;
  out.reserve(sys.modes.size());
  for (std::size_t i = 0; i < sys.modes.size(); ++i) {
    const auto& m = sys.modes[i];
    const double s2 = sys.hbar * frame.rho(i);
    if (m.is_fock()) {
      out.push_back({s2 * (0.5 + m.n), std::pow(s2, 1.5) * unit_abs3(m.n)});
    } else {
      const auto d = mode_marginal(m, frame.mu[i], frame.nu[i], sys.hbar,
                                   policy_grid(m, frame.mu[i], frame.nu[i], sys.hbar));
      const auto mo = moments(d);
      out.push_back({mo.var, mo.abs3});
    }
  }
  return out;
}

double sigma2_closed(const SystemSpec& sys, const FrameSpec& frame) {
  double s = 0.0;
  for (const auto& m : mode_moments(sys, frame)) s += m.var;
  return s;
}

double sigma2_printed(const SystemSpec& sys, const FrameSpec& frame) {
  sys.validate();
  frame.validate(sys.modes.size());
  double s = 0.0;
  for (std::size_t i = 0; i < sys.modes.size(); ++i) {
    const auto& m = sys.modes[i];
    s += m.is_fock() ? fock_var_closed(m.n, frame.mu[i], frame.nu[i], sys.hbar)
                     : evenodd_var_closed(m.alpha, parity_of(m), frame.mu[i], frame.nu[i], sys.hbar);
  }
  return s;
}

GaussianDistance gaussian_distance(const CenterOfMassDensity& d, double sigma2) {
  if (!(sigma2 > 0.0)) throw ConfigError("Gaussian reference needs sigma2 > 0");
  const double sigma = std::sqrt(sigma2);
  const Grid& g = d.grid;
  const auto F = corrected_cdf(g, d.values);
  std::vector<double> diff(g.count);
  GaussianDistance out;
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.x(i);
    const double G = 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
    out.ks = std::max(out.ks, std::abs(F[i] - G));
    const double pdf = std::exp(-0.5 * x * x / sigma2) / (sigma * std::sqrt(2.0 * special::pi));
    diff[i] = std::abs(d.values[i] - pdf);
  }
  out.tv = 0.5 * trapezoid(g, diff);
  return out;
}

CltReport clt_point(const SystemSpec& sys, const FrameSpec& frame, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const auto mm = mode_moments(sys, frame);
  CltReport r;
  r.N = static_cast<int>(sys.modes.size());
  r.hbar = sys.hbar;
  r.S_N = lyapunov_ratio(mm);
  for (const auto& m : mm) r.sigma2 += m.var;
  const double E = energy(sys);
  r.rE = frame.r * E;
  r.RE = frame.R * E;

  const auto marginals = build_marginals(sys, frame);
  const auto cm = convolve_fft(marginals);
  const auto dist = gaussian_distance(cm, r.sigma2);
  r.ks_distance = dist.ks;
  r.tv_distance = dist.tv;
  r.epsilon = epsilon;
  r.mass_in_epsilon = std::clamp(integrate_interval(cm.grid, cm.values, -epsilon, epsilon), 0.0, 1.0);
  r.gaussian_mass = std::erf(epsilon / std::sqrt(2.0 * r.sigma2));
  return r;
}

std::vector<CltReport> n_scan(const std::vector<ModeSpec>& modes_schedule, const FrameSpec& frame_schedule,
                              double E, const std::vector<int>& N_list, double epsilon) {
  if (modes_schedule.empty()) throw ConfigError("n_scan needs a non-empty mode schedule");
  if (frame_schedule.mu.empty() || frame_schedule.mu.size() != frame_schedule.nu.size())
    throw ConfigError("n_scan needs a non-empty frame schedule with equal mu and nu counts");
  std::vector<CltReport> out;
  for (int N : N_list) {
    if (N < 1) throw ConfigError("n_scan: N must be positive, got " + std::to_string(N));
    auto sys = prefix_system(modes_schedule, N, 1.0);
    sys.hbar = hbar_for_fixed_energy(E, sys.modes);
    out.push_back(clt_point(sys, prefix_frame(frame_schedule, N), epsilon));
  }
  return out;
}

std::vector<CltReport> hbar_scan(const SystemSpec& sys_base, const FrameSpec& frame,
                                 const std::vector<double>& hbar_list, double epsilon) {
  for (std::size_t i = 1; i < hbar_list.size(); ++i) {
    if (!(hbar_list[i] < hbar_list[i - 1])) throw ConfigError("hbar_list must be strictly decreasing");
  }
  std::vector<CltReport> out;
  for (double h : hbar_list) {
    SystemSpec sys = sys_base;
    sys.hbar = h;
    out.push_back(clt_point(sys, frame, epsilon));
  }
  return out;
}

}  // namespace cmtomo

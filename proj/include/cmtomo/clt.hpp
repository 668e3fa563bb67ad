#pragma once

#include <span>
#include <vector>

#include "cmtomo/convolution.hpp"
#include "cmtomo/states.hpp"

namespace cmtomo {

/// One point of a limit experiment.
struct CltReport {
  int N = 0;
  double hbar = 0.0;
  double S_N = 0.0;
  double sigma2 = 0.0;
  double rE = 0.0;
  double RE = 0.0;
  double ks_distance = 0.0;
  double tv_distance = 0.0;
  double mass_in_epsilon = 0.0;
  double epsilon = 0.0;
  /// erf(epsilon / (sigma sqrt 2)): mass the Gaussian approximation predicts.
  double gaussian_mass = 0.0;
};

struct ModeMoments {
  double var = 0.0;
  double abs3 = 0.0;
};

/// (sum abs3) / (sum var)^{3/2}.
double lyapunov_ratio(std::span<const ModeMoments> per_mode);

/// Per-mode variance and E|x|^3. Fock modes use the closed variance and the
/// exact Laguerre abs3, both written as (hbar rho)^p times an hbar-free
/// factor so that S_N cancels hbar to rounding. Cat modes use trapezoid
/// moments of their tomogram.
std::vector<ModeMoments> mode_moments(const SystemSpec& sys, const FrameSpec& frame);

/// Var(s_N): closed form for Fock modes, tomogram moments for cat modes.
double sigma2_closed(const SystemSpec& sys, const FrameSpec& frame);
/// Same sum with the printed cat variance formula in place of the moments.
double sigma2_printed(const SystemSpec& sys, const FrameSpec& frame);

struct GaussianDistance {
  double ks = 0.0;
  double tv = 0.0;
};

/// KS and TV distance between d and the centred Gaussian of variance sigma2,
/// both evaluated on d's grid.
GaussianDistance gaussian_distance(const CenterOfMassDensity& d, double sigma2);

/// Fixed-energy scan over N. Mode i and frame i of an N-mode system are
/// schedule entries i mod size. hbar = E / (N/2 + sum n_i).
std::vector<CltReport> n_scan(const std::vector<ModeSpec>& modes_schedule, const FrameSpec& frame_schedule,
                              double E, const std::vector<int>& N_list, double epsilon = 0.1);

/// Classical-limit scan: the same system at each hbar in hbar_list.
std::vector<CltReport> hbar_scan(const SystemSpec& sys_base, const FrameSpec& frame,
                                 const std::vector<double>& hbar_list, double epsilon = 0.1);

/// Full report for one system: moments, convolution, distances, mass.
CltReport clt_point(const SystemSpec& sys, const FrameSpec& frame, double epsilon);

}  // namespace cmtomo

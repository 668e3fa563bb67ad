#pragma once

#include <complex>
#include <string>
#include <vector>

namespace cmtomo {

using cplx = std::complex<double>;

enum class ModeKind { fock, even, odd };

/// One oscillator mode: a Fock level or an even/odd coherent (cat) state.
struct ModeSpec {
  ModeKind kind = ModeKind::fock;
  int n = 0;        ///< Fock level, used when kind == fock
  cplx alpha = 0;   ///< coherent amplitude, used for even/odd

  static ModeSpec fock(int level);
  static ModeSpec even(cplx a);
  static ModeSpec odd(cplx a);

  bool is_fock() const { return kind == ModeKind::fock; }
  /// Throws ConfigError when the mode violates its invariants.
  void validate() const;
  std::string describe() const;

  friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

/// Product state of several modes at a given Planck constant (m = Omega = 1).
struct SystemSpec {
  std::vector<ModeSpec> modes;
  double hbar = 1.0;

  void validate() const;
};

/// Per-mode tomography frame (mu_i, nu_i) with uniform bounds
/// r < mu_i^2 + nu_i^2 < R.
struct FrameSpec {
  std::vector<double> mu;
  std::vector<double> nu;
  double r = 0.0;
  double R = 0.0;

  double rho(std::size_t i) const { return mu[i] * mu[i] + nu[i] * nu[i]; }
  void validate(std::size_t mode_count) const;
  /// Same (mu, nu) for every one of `count` modes.
  static FrameSpec uniform(std::size_t count, double mu, double nu, double r, double R);
};

/// Fock-basis amplitudes c_0..c_D of a pure single-mode state, unit norm.
struct FockExpansion {
  std::vector<cplx> coefficients;
  /// Mass beyond the truncation, relative to the full norm, before renormalizing.
  double tail = 0.0;

  int truncation() const { return static_cast<int>(coefficients.size()) - 1; }
  double norm2() const;
  double mean_number() const;
};

inline constexpr int default_fock_cap = 512;
inline constexpr double fock_tail_bound = 1e-12;

/// Fock expansion of a mode. D is the starting truncation; it doubles until
/// the pre-normalization tail is below 1e-12. Throws NumericalError if that
/// needs more than `cap` levels.
FockExpansion fock_expansion(const ModeSpec& mode, int D = 32, int cap = default_fock_cap);

/// Plain coherent state |alpha>; used by the matrix-element oracles.
FockExpansion coherent_expansion(cplx alpha, int D = 32, int cap = default_fock_cap);

/// hbar (1/2 + <n>) summed over modes. Fock modes use n exactly; coherent
/// modes use <n> from their Fock expansion.
double energy(const SystemSpec& sys);

/// hbar = E / (N/2 + sum n_i): the Planck constant that fixes the energy of
/// a Fock product at E. Rejects non-Fock modes.
double hbar_for_fixed_energy(double E, const std::vector<ModeSpec>& modes);

}  // namespace cmtomo

#include "cmtomo/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmtomo/errors.hpp"

namespace cmtomo {

ModeSpec ModeSpec::fock(int level) {
  ModeSpec m;
  m.kind = ModeKind::fock;
  m.n = level;
  m.validate();
  return m;
}

ModeSpec ModeSpec::even(cplx a) {
  ModeSpec m;
  m.kind = ModeKind::even;
  m.alpha = a;
  m.validate();
  return m;
}

ModeSpec ModeSpec::odd(cplx a) {
  ModeSpec m;
  m.kind = ModeKind::odd;
  m.alpha = a;
  m.validate();
  return m;
}

void ModeSpec::validate() const {
  switch (kind) {
    case ModeKind::fock:
      if (n < 0) throw ConfigError("Fock level must be nonnegative, got " + std::to_string(n));
      break;
    case ModeKind::even:
      if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw ConfigError("coherent amplitude must be finite");
      break;
    case ModeKind::odd:
      if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw ConfigError("coherent amplitude must be finite");
      if (std::abs(alpha) == 0.0)
        throw ConfigError("odd coherent state requires |alpha| > 0");
      break;
  }
}

std::string ModeSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case ModeKind::fock: os << "fock " << n; break;
    case ModeKind::even: os << "even " << alpha.real() << ' ' << alpha.imag(); break;
    case ModeKind::odd: os << "odd " << alpha.real() << ' ' << alpha.imag(); break;
  }
  return os.str();
}

void SystemSpec::validate() const {
  if (modes.empty()) throw ConfigError("system needs at least one mode");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive and finite");
  for (const auto& m : modes) m.validate();
}

void FrameSpec::validate(std::size_t mode_count) const {
  if (mu.size() != mode_count || nu.size() != mode_count) {
    throw ConfigError("frame has " + std::to_string(mu.size()) + " mu and " +
                      std::to_string(nu.size()) + " nu values for " + std::to_string(mode_count) +
                      " modes");
  }
  if (!(r > 0.0) || !(R > r)) throw ConfigError("frame bounds need 0 < r < R");
  for (std::size_t i = 0; i < mode_count; ++i) {
    const double p = rho(i);
    if (!(p > r && p < R)) {
      std::ostringstream os;
      os << "frame " << i << ": mu^2+nu^2 = " << p << " outside (" << r << ", " << R << ")";
      throw ConfigError(os.str());
    }
  }
}

FrameSpec FrameSpec::uniform(std::size_t count, double mu, double nu, double r, double R) {
  FrameSpec f;
  f.mu.assign(count, mu);
  f.nu.assign(count, nu);
  f.r = r;
  f.R = R;
  return f;
}

double FockExpansion::norm2() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::norm(c);
  return s;
}

double FockExpansion::mean_number() const {
  double s = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) s += static_cast<double>(k) * std::norm(coefficients[k]);
  return s;
}

namespace {

// Unnormalized alpha^k / sqrt(k!) restricted to the levels selected by
// `parity` (-1 keeps all). Grows D by doubling until the tail is negligible.
FockExpansion coherent_like(cplx alpha, int parity, int D, int cap) {
  if (D < 1) D = 1;
  const double a2 = std::norm(alpha);
  for (;;) {
    if (D > cap) {
      throw NumericalError("Fock expansion needs more than " + std::to_string(cap) +
                           " levels for |alpha| = " + std::to_string(std::sqrt(a2)));
    }
    std::vector<cplx> c(static_cast<std::size_t>(D) + 1, 0.0);
    cplx term = 1.0;
    double kept = 0.0;
    for (int k = 0; k <= D; ++k) {
      if (k > 0) term *= alpha / std::sqrt(static_cast<double>(k));
      if (parity < 0 || k % 2 == parity) {
        c[k] = term;
        kept += std::norm(term);
      }
    }
    // Tail: continue the series until the terms stop contributing.
    double tail = 0.0;
    double t2 = std::norm(term);
    for (int k = D + 1; k < D + 100000; ++k) {
      t2 *= a2 / k;
      if (parity < 0 || k % 2 == parity) tail += t2;
      if (t2 < 1e-40 * (kept + tail) && k > a2) break;
    }
    const double total = kept + tail;
    const double rel_tail = total > 0.0 ? tail / total : 0.0;
    if (total > 0.0 && rel_tail < fock_tail_bound) {
      const double s = 1.0 / std::sqrt(kept);
      for (auto& x : c) x *= s;
      return FockExpansion{std::move(c), rel_tail};
    }
    D *= 2;
  }
}

}  // namespace

FockExpansion fock_expansion(const ModeSpec& mode, int D, int cap) {
  mode.validate();
  switch (mode.kind) {
    case ModeKind::fock: {
      if (mode.n > cap) throw NumericalError("Fock level exceeds the truncation cap");
      const int dim = std::max(D, mode.n);
      std::vector<cplx> c(static_cast<std::size_t>(dim) + 1, 0.0);
      c[mode.n] = 1.0;
      return FockExpansion{std::move(c), 0.0};
    }
    case ModeKind::even:
      if (std::abs(mode.alpha) == 0.0) {
        std::vector<cplx> c(static_cast<std::size_t>(std::max(D, 0)) + 1, 0.0);
        c[0] = 1.0;
        return FockExpansion{std::move(c), 0.0};
      }
      return coherent_like(mode.alpha, 0, D, cap);
    case ModeKind::odd:
      return coherent_like(mode.alpha, 1, D, cap);
  }
  throw std::logic_error("unreachable");
}

FockExpansion coherent_expansion(cplx alpha, int D, int cap) {
  if (std::abs(alpha) == 0.0) {
    std::vector<cplx> c(static_cast<std::size_t>(std::max(D, 0)) + 1, 0.0);
    c[0] = 1.0;
    return FockExpansion{std::move(c), 0.0};
  }
  return coherent_like(alpha, -1, D, cap);
}

double energy(const SystemSpec& sys) {
  sys.validate();
  double quanta = 0.0;
  for (const auto& m : sys.modes) {
    quanta += 0.5 + (m.is_fock() ? static_cast<double>(m.n) : fock_expansion(m).mean_number());
  }
  return sys.hbar * quanta;
}

double hbar_for_fixed_energy(double E, const std::vector<ModeSpec>& modes) {
  if (!(E > 0.0) || !std::isfinite(E)) throw ConfigError("energy must be positive and finite");
  if (modes.empty()) throw ConfigError("fixed-energy constraint needs at least one mode");
  double quanta = 0.0;
  for (const auto& m : modes) {
    if (!m.is_fock()) {
      throw ConfigError("fixed-energy constraint is only defined for Fock products, got mode '" +
                        m.describe() + "'");
    }
    m.validate();
    quanta += 0.5 + m.n;
  }
  return E / quanta;
}

}  // namespace cmtomo

#include <doctest.h>

#include <cmath>

#include "cmtomo/clt.hpp"
#include "cmtomo/errors.hpp"
#include "cmtomo/special_functions.hpp"

using namespace cmtomo;
using special::pi;
using special::sqrt_pi;

namespace {

SystemSpec fock_system(int N, int n, double hbar) { return SystemSpec{std::vector<ModeSpec>(N, ModeSpec::fock(n)), hbar}; }

}  // namespace

TEST_CASE("Lyapunov ratio of four vacua") {
  const auto sys = fock_system(4, 0, 1.0);
  const auto f = FrameSpec::uniform(4, 1.0, 0.0, 0.5, 2.0);
  // 4 (1/sqrt pi) / 2^{3/2} = sqrt(2/pi)
  CHECK(lyapunov_ratio(mode_moments(sys, f)) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-13));
  CHECK(lyapunov_ratio(mode_moments(sys, f)) == doctest::Approx(0.797885).epsilon(1e-6));
  CHECK(sigma2_closed(sys, f) == 2.0);
}

TEST_CASE("S_N of identical modes falls as 1/sqrt N") {
  for (int n : {0, 1, 5}) {
    for (int N : {1, 3, 16}) {
      const auto a = lyapunov_ratio(mode_moments(fock_system(N, n, 1.0), FrameSpec::uniform(N, 0.6, 0.8, 0.5, 2.0)));
      const auto b =
          lyapunov_ratio(mode_moments(fock_system(4 * N, n, 1.0), FrameSpec::uniform(4 * N, 0.6, 0.8, 0.5, 2.0)));
      CHECK(b / a == doctest::Approx(0.5).epsilon(1e-13));
    }
  }
}

TEST_CASE("S_N does not depend on hbar") {
  const auto f = FrameSpec::uniform(3, 0.6, 0.8, 0.5, 2.0);
  SystemSpec sys{{ModeSpec::fock(0), ModeSpec::fock(2), ModeSpec::fock(7)}, 1.0};
  const double base = lyapunov_ratio(mode_moments(sys, f));
  for (double h : {1e-3, 0.37, 50.0}) {
    sys.hbar = h;
    CHECK(std::abs(lyapunov_ratio(mode_moments(sys, f)) - base) < 1e-12);
  }
}

TEST_CASE("sigma2 stays between r E and R E") {
  const double r = 0.5, R = 2.0;
  SystemSpec sys{{ModeSpec::fock(1), ModeSpec::fock(3), ModeSpec::even(1.2), ModeSpec::odd(cplx(0.2, 0.9))}, 0.4};
  FrameSpec f{{0.8, 0.0, 1.1, -0.5}, {0.0, 1.2, 0.3, 0.9}, r, R};
  const double s2 = sigma2_closed(sys, f);
  const double E = energy(sys);
  // Cat variance depends on the orientation of alpha; the bound holds for Fock modes.
  SystemSpec fock{{ModeSpec::fock(1), ModeSpec::fock(3)}, 0.4};
  FrameSpec ff{{0.8, 0.0}, {0.0, 1.2}, r, R};
  const double fs2 = sigma2_closed(fock, ff);
  CHECK(fs2 >= r * energy(fock));
  CHECK(fs2 <= R * energy(fock));
  CHECK(s2 > 0.0);
  CHECK(std::isfinite(E));
  CHECK(sigma2_printed(fock, ff) == fs2);
}

TEST_CASE("KS distance of an exact Gaussian is negligible") {
  const auto sys = fock_system(2, 0, 1.0);
  const auto f = FrameSpec::uniform(2, 1.0, 0.0, 0.5, 2.0);
  const auto d = convolve_fft(build_marginals(sys, f));
  const auto g = gaussian_distance(d, 1.0);
  CHECK(g.ks < 1e-9);
  CHECK(g.tv < 1e-6);
}

TEST_CASE("Fock 1 against its Gaussian") {
  // Oracle: F(x) = Phi(x; 1/2) - x e^{-x^2}/sqrt(pi), G(x) = Phi(x; 3/2).
  double ks = 0.0;
  for (int i = -40000; i <= 40000; ++i) {
    const double x = i * 2e-4;
    const double F = 0.5 * (1.0 + std::erf(x)) - x * std::exp(-x * x) / sqrt_pi;
    const double G = 0.5 * (1.0 + std::erf(x / std::sqrt(3.0)));
    ks = std::max(ks, std::abs(F - G));
  }
  const auto rep = clt_point(fock_system(1, 1, 1.0), FrameSpec::uniform(1, 1.0, 0.0, 0.5, 2.0), 0.1);
  CHECK(rep.sigma2 == 1.5);
  // The sup is taken over grid nodes only, spacing sigma/64.
  CHECK(rep.ks_distance == doctest::Approx(ks).epsilon(1e-4));
  MESSAGE("KS(Fock 1, Gaussian) = " << rep.ks_distance);
}

TEST_CASE("fixed-energy scan") {
  const std::vector<int> Ns{4, 8, 16, 32, 64};
  const auto rows = n_scan({ModeSpec::fock(1)}, FrameSpec::uniform(1, 1.0, 0.0, 0.5, 2.0), 10.0, Ns);
  REQUIRE(rows.size() == Ns.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].N == Ns[i]);
    CHECK(rows[i].hbar == doctest::Approx(10.0 / (1.5 * Ns[i])).epsilon(1e-15));
    CHECK(rows[i].sigma2 == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(rows[i].rE == 5.0);
    CHECK(rows[i].RE == 20.0);
    CHECK(rows[i].sigma2 >= rows[i].rE);
    CHECK(rows[i].sigma2 <= rows[i].RE);
    if (i > 0) {
      CHECK(rows[i].S_N / rows[i - 1].S_N == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
      CHECK(rows[i].ks_distance <= rows[i - 1].ks_distance);
    }
  }
  CHECK(rows.back().ks_distance <= rows.front().ks_distance / 3.0);
}

TEST_CASE("fixed-energy scan cycles mixed schedules") {
  const std::vector<ModeSpec> sched{ModeSpec::fock(0), ModeSpec::fock(2)};
  FrameSpec f{{1.0, 0.0}, {0.0, 1.0}, 0.5, 2.0};
  const auto rows = n_scan(sched, f, 6.0, {2, 5});
  // N = 5: levels 0 2 0 2 0 -> hbar = 6 / (2.5 + 4)
  CHECK(rows[1].hbar == doctest::Approx(6.0 / 6.5).epsilon(1e-15));
  CHECK(rows[1].sigma2 == doctest::Approx(6.0).epsilon(1e-13));
  CHECK_THROWS_AS(n_scan({ModeSpec::even(1.0)}, FrameSpec::uniform(1, 1.0, 0.0, 0.5, 2.0), 1.0, {2}), ConfigError);
}

TEST_CASE("classical-limit scan concentrates mass") {
  const auto sys = fock_system(8, 1, 1.0);
  const auto f = FrameSpec::uniform(8, 1.0, 0.0, 0.5, 2.0);
  const std::vector<double> hs{1.0, 0.1, 0.01, 0.001};
  const auto rows = hbar_scan(sys, f, hs, 0.1);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double s2 = 8 * 1.5 * hs[i];
    CHECK(rows[i].sigma2 == doctest::Approx(s2).epsilon(1e-13));
    CHECK(rows[i].gaussian_mass == doctest::Approx(std::erf(0.1 / std::sqrt(2.0 * s2))).epsilon(1e-14));
    CHECK(std::abs(rows[i].mass_in_epsilon - rows[i].gaussian_mass) < 0.02);
    if (i > 0) CHECK(rows[i].mass_in_epsilon > rows[i - 1].mass_in_epsilon);
  }
  CHECK_THROWS_AS(hbar_scan(sys, f, {0.1, 1.0}), ConfigError);
}

TEST_CASE("classical-limit scan with cats is monotone") {
  SystemSpec sys{{ModeSpec::even(1.0), ModeSpec::odd(cplx(0.5, 0.5)), ModeSpec::fock(2)}, 1.0};
  const auto f = FrameSpec::uniform(3, 0.6, 0.8, 0.5, 2.0);
  const auto rows = hbar_scan(sys, f, {1.0, 0.3, 0.1, 0.03, 0.01}, 0.1);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].mass_in_epsilon > rows[i - 1].mass_in_epsilon);
  for (const auto& r : rows) {
    CHECK(r.mass_in_epsilon >= 0.0);
    CHECK(r.mass_in_epsilon <= 1.0);
  }
}

TEST_CASE("S_N sqrt N is bounded for identical cat modes") {
  const auto f1 = FrameSpec::uniform(1, 0.6, 0.8, 0.5, 2.0);
  const double one = lyapunov_ratio(mode_moments(SystemSpec{{ModeSpec::even(1.5)}, 1.0}, f1));
  for (int N : {2, 9, 40}) {
    const SystemSpec sys{std::vector<ModeSpec>(N, ModeSpec::even(1.5)), 1.0};
    const double s = lyapunov_ratio(mode_moments(sys, FrameSpec::uniform(N, 0.6, 0.8, 0.5, 2.0)));
    CHECK(s * std::sqrt(static_cast<double>(N)) == doctest::Approx(one).epsilon(1e-12));
  }
}

TEST_CASE("mass in epsilon of a single vacuum") {
  const auto rep = clt_point(fock_system(1, 0, 1.0), FrameSpec::uniform(1, 1.0, 0.0, 0.5, 2.0), 0.3);
  // Piecewise-linear integration, O(dx^2).
  CHECK(rep.mass_in_epsilon == doctest::Approx(std::erf(0.3)).epsilon(1e-4));
  CHECK(rep.gaussian_mass == doctest::Approx(std::erf(0.3)).epsilon(1e-14));
}

#include <doctest.h>

#include <cmath>

#include "cmtomo/errors.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/reconstruct.hpp"

using namespace cmtomo;

namespace {

Reconstruction reconstruct(const ModeSpec& m, int dim, double hbar = 1.0, ReconstructOptions o = {},
                           Exec exec = Exec::parallel) {
  return reconstruct_single_mode(mode_tomogram(m, hbar), dim, hbar, o, exec);
}

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) e = std::max(e, std::abs(a.entries[i] - b.entries[i]));
  return e;
}

}  // namespace

TEST_CASE("quadrature matrices") {
  const auto qp = quadrature_matrices(2, 1.0);
  CHECK(qp.Q(0, 1) == cplx(std::sqrt(0.5)));
  CHECK(qp.Q(1, 0) == cplx(std::sqrt(0.5)));
  CHECK(qp.P(0, 1) == cplx(0.0, -std::sqrt(0.5)));
  CHECK(qp.P(1, 0) == cplx(0.0, std::sqrt(0.5)));
  CHECK(qp.Q(0, 0) == cplx(0.0));
  CHECK_THROWS_AS(quadrature_matrices(1, 1.0), ConfigError);
}

TEST_CASE("truncated commutator is i hbar except in the last level") {
  const int d = 6;
  const double hbar = 0.3;
  const auto qp = quadrature_matrices(d, hbar);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      cplx c = 0.0;
      for (int k = 0; k < d; ++k) c += qp.Q(i, k) * qp.P(k, j) - qp.P(i, k) * qp.Q(k, j);
      const cplx expected = i != j ? cplx(0.0) : (i + 1 < d ? cplx(0.0, hbar) : cplx(0.0, -hbar * (d - 1)));
      CHECK(std::abs(c - expected) < 1e-15);
    }
  }
  cplx q2 = 0.0;
  for (int k = 0; k < d; ++k) q2 += qp.Q(0, k) * qp.Q(k, 0);
  CHECK(q2.real() == doctest::Approx(hbar / 2.0).epsilon(1e-15));
}

TEST_CASE("Fock states round trip") {
  for (int n : {0, 1, 3}) {
    const auto r = reconstruct(ModeSpec::fock(n), 8);
    INFO("n = " << n);
    CHECK(fidelity(r.rho, fock_expansion(ModeSpec::fock(n), 8)) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(r.pre_rescale_trace - 1.0) < 1e-6);
    CHECK_FALSE(r.leakage);
    CHECK(r.warnings.empty());
  }
}

TEST_CASE("cat states round trip") {
  for (const auto& m : {ModeSpec::even(1.0), ModeSpec::odd(cplx(0.7, 0.7)), ModeSpec::odd(1.5)}) {
    const auto r = reconstruct(m, 16);
    INFO(m.describe());
    CHECK(fidelity(r.rho, fock_expansion(m)) > 1.0 - 1e-6);
    CHECK(r.min_eigenvalue > -1e-6);
  }
}

TEST_CASE("reconstruction is independent of hbar") {
  const auto a = reconstruct(ModeSpec::fock(2), 6, 1.0);
  const auto b = reconstruct(ModeSpec::fock(2), 6, 0.2);
  CHECK(max_diff(a.rho, b.rho) < 1e-6);
}

TEST_CASE("reconstruction is linear in the tomogram") {
  const double hbar = 1.0;
  ReconstructOptions o;
  o.K = 12.0;
  const auto wa = mode_tomogram(ModeSpec::fock(0), hbar);
  const auto wb = mode_tomogram(ModeSpec::even(1.0), hbar);
  const auto mix = [&](double X, double mu, double nu) { return 0.3 * wa(X, mu, nu) + 0.7 * wb(X, mu, nu); };
  const auto ra = reconstruct_single_mode(wa, 8, hbar, o);
  const auto rb = reconstruct_single_mode(wb, 8, hbar, o);
  const auto rm = reconstruct_single_mode(mix, 8, hbar, o);
  auto expected = ComplexMatrix::zero(8);
  for (std::size_t i = 0; i < expected.entries.size(); ++i)
    expected.entries[i] = 0.3 * ra.raw.entries[i] + 0.7 * rb.raw.entries[i];
  CHECK(max_diff(rm.raw, expected) < 1e-4);
  // The mixture of |0> and the even cat is a mixed state.
  cplx purity = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) purity += rm.rho(i, j) * rm.rho(j, i);
  CHECK(purity.real() < 0.99);
}

TEST_CASE("output is Hermitian with unit trace") {
  const auto r = reconstruct(ModeSpec::odd(cplx(0.4, -0.8)), 10);
  CHECK(hermiticity_error(r.rho) == 0.0);
  CHECK(hermiticity_error(r.raw) < 1e-8);
  CHECK(std::abs(r.rho.trace() - cplx(1.0)) < 1e-14);
  CHECK(r.min_eigenvalue == doctest::Approx(min_eigenvalue(r.rho)));
}

TEST_CASE("truncation leakage is reported") {
  const auto r = reconstruct(ModeSpec::even(2.0), 4);
  CHECK(r.leakage);
  CHECK(r.pre_rescale_trace < 0.95);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("leakage") != std::string::npos);
}

TEST_CASE("default cutoff grows with the state's spread") {
  const auto small = reconstruct(ModeSpec::fock(0), 4);
  const auto large = reconstruct(ModeSpec::even(2.0), 4);
  CHECK(small.K > 8.0);
  CHECK(large.K > small.K);
  ReconstructOptions o;
  o.K = 5.0;
  CHECK(reconstruct(ModeSpec::fock(0), 4, 1.0, o).K == 5.0);
}

TEST_CASE("invalid reconstruction settings") {
  const auto w = mode_tomogram(ModeSpec::fock(0), 1.0);
  CHECK_THROWS_AS(reconstruct_single_mode(w, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(reconstruct_single_mode(w, 4, 0.0), ConfigError);
  ReconstructOptions o;
  o.theta_steps = 0;
  CHECK_THROWS_AS(reconstruct_single_mode(w, 4, 1.0, o), ConfigError);
}

TEST_CASE("serial and parallel reconstructions are bit-identical") {
  const auto a = reconstruct(ModeSpec::even(cplx(0.5, 0.5)), 6, 1.0, {}, Exec::serial);
  const auto b = reconstruct(ModeSpec::even(cplx(0.5, 0.5)), 6, 1.0, {}, Exec::parallel);
  CHECK(a.raw.entries == b.raw.entries);
  CHECK(a.rho.entries == b.rho.entries);
}

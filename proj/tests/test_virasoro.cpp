#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "entvir/pipeline.hpp"

using namespace entvir;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("profile geometry") {
  const LatticeProfile profile(8, 0.04);
  CHECK(profile.sites() == 16);
  CHECK(profile.l() == doctest::Approx(std::log(16.0 / 0.04)).epsilon(1e-15));
  CHECK(profile.theta(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  // Bond j = 1..2N-1 sits at j - N; the first bond at 1 - N.
  CHECK(profile.bond_position(0) == doctest::Approx(-7.0));
  CHECK(profile.bond_position(14) == doctest::Approx(7.0));
  CHECK(profile.momentum_position(1) == doctest::Approx(1.5 - 8.0));
  // theta decreases from the pi side to the 0 side.
  double prev = kPi;
  for (long b = 0; b < 15; ++b) {
    const double t = profile.theta(profile.bond_position(b));
    CHECK(t < prev);
    CHECK(t > 0.0);
    CHECK(profile.envelope(profile.bond_position(b)) >= 0.0);
    prev = t;
  }
  CHECK_THROWS_AS(LatticeProfile(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(LatticeProfile(4, 0.0), std::invalid_argument);
}

TEST_CASE("H_0 weights follow the parabolic envelope and carry the constant") {
  const ModelParams ising = ModelParams::preset("ising");
  const LatticeProfile profile(512, 0.037);
  const QuadraticOperator h0 = build_Hn(ising, profile, 0);
  CHECK(h0.is_hermitian());

  const double pref = profile.l() / kPi;
  for (long b : {0L, 100L, 511L, 1022L}) {
    const double w = pref * profile.envelope(profile.bond_position(b));
    CHECK(h0.one_body(b + 1, b).real() == doctest::Approx(0.5 * w).epsilon(1e-13));
  }

  // Additive constant: -e0 sum(w) + (c/24)(1 + 4 l^2/pi^2).
  double wsum = 0.0;
  for (long b = 0; b + 1 < profile.sites(); ++b)
    wsum += pref * profile.envelope(profile.bond_position(b));
  const double l = profile.l();
  const double expected = -ground_energy_density(ising) * wsum +
                          0.5 / 24.0 * (1.0 + 4.0 * l * l / (kPi * kPi));
  CHECK(h0.constant.real() == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(build_Hn(ising, profile, -1), std::invalid_argument);
}

TEST_CASE("H_1 weight vanishes on the center bond") {
  const LatticeProfile profile(8, 0.04);
  const QuadraticOperator h1 = build_Hn(ModelParams::preset("ising"), profile, 1);
  // Center bond couples sites N-1, N and sits at x = 0.
  CHECK(std::abs(h1.one_body(8, 7)) < 1e-14);
  CHECK(std::abs(h1.one_body(7, 8)) < 1e-14);
}

TEST_CASE("L_n identities") {
  for (const char* name : {"ising", "xy09", "xx"}) {
    const ModelParams p = ModelParams::preset(name);
    for (long n2 : {8L, 32L}) {
      const LatticeProfile profile(n2 / 2, 0.04);
      for (int n : {0, 1, 2, 3}) {
        const QuadraticOperator hn = build_Hn(p, profile, n);
        const QuadraticOperator lp = build_Ln(p, profile, n);
        const QuadraticOperator lm = build_Ln(p, profile, -n);
        // (L_n + L_{-n})/2 = H_n at the coefficient level.
        const QuadraticOperator avg = Complex(0.5, 0.0) * (lp + lm);
        CHECK(max_coefficient_difference(avg, hn) < 1e-14);
        // adjoint(L_n) = L_{-n}.
        CHECK(max_coefficient_difference(lp.adjoint(), lm) < 1e-13);
        if (n == 0) CHECK(lp.is_hermitian());
      }
    }
  }
}

TEST_CASE("basis change is exact on round trips and trivial transforms") {
  const ModelParams ising = ModelParams::preset("ising");
  const LatticeProfile profile(4, 0.04);
  const QuadraticOperator h1 = build_Hn(ising, profile, 1);

  BogoliubovTransform identity;
  identity.A = Eigen::MatrixXcd::Identity(8, 8);
  identity.B = Eigen::MatrixXcd::Zero(8, 8);
  const QuadraticOperator same = to_entanglement_basis(h1, identity);
  CHECK(max_coefficient_difference(same, h1) < 1e-14);

  const auto diag = diagonalize(build_correlation_matrix(ising, 8));
  const QuadraticOperator fwd = to_entanglement_basis(h1, diag.transform);
  const QuadraticOperator back = from_entanglement_basis(fwd, diag.transform);
  CHECK(max_coefficient_difference(back, h1) < 1e-13);

  BogoliubovTransform wrong;
  wrong.A = Eigen::MatrixXcd::Identity(4, 4);
  wrong.B = Eigen::MatrixXcd::Zero(4, 4);
  CHECK_THROWS_AS(to_entanglement_basis(h1, wrong), std::invalid_argument);
}

TEST_CASE("matrix elements obey the quadratic selection rules") {
  const ModelParams ising = ModelParams::preset("ising");
  const auto diag = diagonalize(build_correlation_matrix(ising, 8));
  const LatticeProfile profile(4, 0.04);
  const QuadraticOperator h1 =
      to_entanglement_basis(build_Hn(ising, profile, 1), diag.transform);

  const auto states = enumerate_schmidt(diag.spectrum, 20);
  // Vacuum diagonal element is the rotated constant.
  CHECK(matrix_element(h1, states[0], states[0]) == h1.constant);

  // Occupations differing in four modes are disconnected.
  SchmidtState a, b;
  a.occupation = {0, 1};
  b.occupation = {2, 3};
  CHECK(matrix_element(h1, a, b) == Complex(0.0, 0.0));
  b.occupation = {0, 1, 2, 3, 4, 5};
  CHECK(matrix_element(h1, a, b) == Complex(0.0, 0.0));

  // Hermitian operator gives a Hermitian table.
  const Eigen::MatrixXcd t = matrix_element_table(h1, states);
  CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode phase gauge only conjugates tables by a diagonal unitary") {
  const ModelParams ising = ModelParams::preset("ising");
  const auto diag = diagonalize(build_correlation_matrix(ising, 8));
  const LatticeProfile profile(4, 0.04);
  const auto states = enumerate_schmidt(diag.spectrum, 7);
  const QuadraticOperator h1 = build_Hn(ising, profile, 1);
  const Eigen::MatrixXcd t0 =
      matrix_element_table(to_entanglement_basis(h1, diag.transform), states);

  // Re-phase every mode and rebuild the table.
  BogoliubovTransform rephased = diag.transform;
  for (Eigen::Index k = 0; k < 8; ++k) {
    const Complex z = std::polar(1.0, 0.31 * static_cast<double>(k + 1));
    rephased.A.row(k) *= z;
    rephased.B.row(k) *= z;
  }
  const Eigen::MatrixXcd t1 =
      matrix_element_table(to_entanglement_basis(h1, rephased), states);
  CHECK((t0.cwiseAbs() - t1.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("first descendant element approaches the exact value at 2N = 64") {
  const ModelParams ising = ModelParams::preset("ising");
  const IntervalRun run = run_interval(ising, 64, 3, true);
  const LatticeProfile profile(32, 0.037);
  const QuadraticOperator l1 =
      to_entanglement_basis(build_Ln(ising, profile, 1), *run.transform);
  const Complex elem = matrix_element(l1, run.states[1], run.states[2]);
  CHECK(std::abs(elem) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("H_0 off-diagonal leakage shrinks with the interval") {
  const ModelParams ising = ModelParams::preset("ising");
  double prev = 1e9;
  for (long sites : {64L, 128L, 256L}) {
    const IntervalRun run = run_interval(ising, sites, 7, true);
    const LatticeProfile profile(sites / 2, 0.037);
    const QuadraticOperator h0 =
        to_entanglement_basis(build_Hn(ising, profile, 0), *run.transform);
    const Eigen::MatrixXcd t = matrix_element_table(h0, run.states);
    Eigen::MatrixXcd off = t;
    off.diagonal().setZero();
    const double leak = off.cwiseAbs().maxCoeff();
    CHECK(leak < prev);
    prev = leak;
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "entvir/gaussian.hpp"

using namespace entvir;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd reconstruct_diag(const CorrelationMatrix& g,
                                  const BogoliubovTransform& bt) {
  const Eigen::MatrixXcd u = bt.unitary();
  return u.conjugate() * g.gamma * u.transpose();
}

}  // namespace

TEST_CASE("correlation matrix blocks and invariants") {
  for (const char* name : {"ising", "xy09", "xx"}) {
    const ModelParams p = ModelParams::preset(name);
    const CorrelationMatrix g = build_correlation_matrix(p, 8);
    const long L = 8;
    CHECK(g.sites() == L);
    // Hermitian,  <aa+> = 1 - <a+a>^T,  <aa> = -<aa>^T.
    CHECK((g.gamma - g.gamma.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXcd tl = g.gamma.topLeftCorner(L, L);
    const Eigen::MatrixXcd br = g.gamma.bottomRightCorner(L, L);
    const Eigen::MatrixXcd bl = g.gamma.bottomLeftCorner(L, L);
    CHECK((br - (Eigen::MatrixXcd::Identity(L, L) - tl.transpose()))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    CHECK((bl + bl.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    // Spectrum within [0, 1].
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.gamma);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-10);
  }
}

TEST_CASE("interval of two sites agrees with the bare correlator") {
  const ModelParams ising = ModelParams::preset("ising");
  const CorrelationMatrix g = build_correlation_matrix(ising, 2);
  const double f0 = correlator(ising, 0).aadag.real();
  CHECK(g.gamma(0, 0).real() == doctest::Approx(1.0 - f0).epsilon(1e-15));
  CHECK(g.gamma(2, 2).real() == doctest::Approx(f0).epsilon(1e-15));
}

TEST_CASE("closed-form matrix entries match quadrature at L = 4") {
  const ModelParams ising = ModelParams::preset("ising");
  const CorrelationMatrix g = build_correlation_matrix(ising, 4);
  for (long d = 0; d < 4; ++d) {
    const auto q = correlator_quadrature(ising, d);
    CHECK(std::abs(g.gamma(4 + d, 4) - q.aadag) < 1e-12);       // <a_d a+_0>
    if (d > 0) CHECK(std::abs(g.gamma(4 + d, 0) - q.aa) < 1e-12);  // <a_d a_0>

  }
}

TEST_CASE("XX pairing blocks vanish exactly and the transform conserves number") {
  const CorrelationMatrix g =
      build_correlation_matrix(ModelParams::preset("xx"), 6);
  CHECK(g.number_conserving());
  const auto diag = diagonalize(g);
  CHECK_FALSE(diag.transform.mode_charge.empty());
  for (Eigen::Index i = 0; i < 6; ++i) {
    const double an = diag.transform.A.row(i).norm();
    const double bn = diag.transform.B.row(i).norm();
    CHECK(std::min(an, bn) == 0.0);
  }
}

TEST_CASE("diagonalization is canonical and reconstructs the spectrum") {
  for (const char* name : {"ising", "xy09", "xx"}) {
    const ModelParams p = ModelParams::preset(name);
    const CorrelationMatrix g = build_correlation_matrix(p, 8);
    const auto diag = diagonalize(g);
    const Eigen::MatrixXcd u = diag.transform.unitary();
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(16, 16))
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    const Eigen::MatrixXcd d = reconstruct_diag(g, diag.transform);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 0; i < 8; ++i) {
      expected(i, i) = diag.spectrum.nus[i];
      expected(8 + i, 8 + i) = 1.0 - diag.spectrum.nus[i];
    }
    CHECK((d - expected).cwiseAbs().maxCoeff() < 1e-10);

    // nu in (0, 1/2], energies ascending and consistent.
    for (int i = 0; i < 8; ++i) {
      CHECK(diag.spectrum.nus[i] > 0.0);
      CHECK(diag.spectrum.nus[i] <= 0.5);
      if (i) CHECK(diag.spectrum.energies[i] >= diag.spectrum.energies[i - 1]);
    }
  }
}

TEST_CASE("values-only route reproduces the transform route") {
  // Occupations below machine precision have indeterminate clipped logs, so
  // only the physically meaningful window is compared entry by entry.
  for (const char* name : {"ising", "xx"}) {
    const ModelParams p = ModelParams::preset(name);
    const CorrelationMatrix g = build_correlation_matrix(p, 64);
    const auto full = diagonalize(g);
    const auto vals = single_particle_spectrum(g);
    CHECK((full.spectrum.nus - vals.nus).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 64; ++i) {
      if (full.spectrum.energies[i] < 12.0)
        CHECK(full.spectrum.energies[i] ==
              doctest::Approx(vals.energies[i]).epsilon(1e-9));
      else
        CHECK(vals.energies[i] >= 12.0 - 1e-6);
    }
    CHECK(full.spectrum.log_norm ==
          doctest::Approx(vals.log_norm).epsilon(1e-12));
  }
}

TEST_CASE("synthetic half-occupied mode survives the pairing") {
  // Rotate a hand-picked spectrum with a legitimate canonical transform and
  // check that diagonalize recovers it, nu = 1/2 included.
  const ModelParams ising = ModelParams::preset("ising");
  const auto seed = diagonalize(build_correlation_matrix(ising, 4));
  const Eigen::MatrixXcd u = seed.transform.unitary();
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(8, 8);
  const std::vector<double> nus = {0.5, 0.2, 0.05, 0.5};
  for (int i = 0; i < 4; ++i) {
    d(i, i) = nus[i];
    d(4 + i, 4 + i) = 1.0 - nus[i];
  }
  CorrelationMatrix synth;
  synth.gamma = u.transpose() * d * u.conjugate();
  // keep it exactly real: the seed transform is real for this model
  synth.gamma = synth.gamma.real().cast<Complex>();

  const auto rec = diagonalize(synth);
  std::vector<double> got(rec.spectrum.nus.data(), rec.spectrum.nus.data() + 4);
  std::vector<double> want = nus;
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
  // e = 0 for the half-occupied modes.
  CHECK(rec.spectrum.energies[0] == doctest::Approx(0.0).epsilon(1e-10));
  const Eigen::MatrixXcd uu = rec.transform.unitary();
  CHECK((uu.adjoint() * uu - Eigen::MatrixXcd::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("schmidt enumeration follows best-first order with lexicographic ties") {
  SingleParticleSpectrum sp;
  sp.energies.resize(3);
  sp.energies << 1.0, 2.0, 3.0;
  sp.nus.resize(3);
  for (int i = 0; i < 3; ++i) sp.nus[i] = 1.0 / (1.0 + std::exp(sp.energies[i]));
  sp.log_norm = 0.0;
  for (int i = 0; i < 3; ++i) sp.log_norm += std::log1p(-sp.nus[i]);

  const auto states = enumerate_schmidt(sp, 4);
  REQUIRE(states.size() == 4);
  CHECK(states[0].occupation.empty());
  CHECK(states[1].occupation == std::vector<int>{0});
  CHECK(states[2].occupation == std::vector<int>{1});
  // Tie at subset sum 3: {0,1} precedes {2} lexicographically.
  CHECK((states[3].occupation == std::vector<int>{0, 1}));
  for (int a = 0; a < 4; ++a)
    CHECK(states[a].energy * 2 * kPi + sp.log_norm ==
          doctest::Approx(double(a)).epsilon(1e-12));

  CHECK_THROWS_AS(enumerate_schmidt(sp, 9), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_schmidt(sp, 0), std::invalid_argument);
}

TEST_CASE("enumeration matches brute force on a full window") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  SingleParticleSpectrum sp;
  const int L = 12;
  sp.energies.resize(L);
  sp.nus.resize(L);
  std::vector<double> e(L);
  for (int i = 0; i < L; ++i) e[i] = u(rng);
  e[3] = e[2];  // force exact degeneracies
  e[7] = e[6];
  std::sort(e.begin(), e.end());
  sp.log_norm = 0.0;
  for (int i = 0; i < L; ++i) {
    sp.energies[i] = e[i];
    sp.nus[i] = 1.0 / (1.0 + std::exp(e[i]));
    sp.log_norm += std::log1p(-sp.nus[i]);
  }

  struct Entry {
    double sum;
    std::vector<int> subset;
  };
  std::vector<Entry> brute;
  for (unsigned mask = 0; mask < (1u << L); ++mask) {
    Entry en;
    en.sum = 0;
    for (int i = 0; i < L; ++i)
      if (mask & (1u << i)) {
        en.subset.push_back(i);
        en.sum += e[i];
      }
    brute.push_back(std::move(en));
  }
  std::sort(brute.begin(), brute.end(), [](const Entry& a, const Entry& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    return std::lexicographical_compare(a.subset.begin(), a.subset.end(),
                                        b.subset.begin(), b.subset.end());
  });

  const auto states = enumerate_schmidt(sp, 1 << L);
  REQUIRE(states.size() == brute.size());
  double total = 0.0;
  double prev = -1.0;
  for (size_t i = 0; i < brute.size(); ++i) {
    CHECK(states[i].occupation == brute[i].subset);
    CHECK(states[i].energy * 2 * kPi + sp.log_norm ==
          doctest::Approx(brute[i].sum).epsilon(1e-11));
    total += states[i].weight;
    if (i) CHECK(states[i].weight <= prev + 1e-15);
    prev = states[i].weight;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vacuum state and completeness on a real model") {
  const ModelParams ising = ModelParams::preset("ising");
  const auto diag = diagonalize(build_correlation_matrix(ising, 8));
  const auto states = enumerate_schmidt(diag.spectrum, 1 << 8);
  CHECK(states[0].occupation.empty());
  CHECK(states[0].energy ==
        doctest::Approx(-diag.spectrum.log_norm / (2 * kPi)).epsilon(1e-13));
  double total = 0.0;
  for (const auto& st : states) total += st.weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy edge cases") {
  SingleParticleSpectrum pure;
  pure.nus = Eigen::VectorXd::Constant(3, 1e-300);
  pure.energies = Eigen::VectorXd::Zero(3);
  CHECK(entanglement_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));

  SingleParticleSpectrum mixed;
  mixed.nus = Eigen::VectorXd::Constant(1, 0.5);
  mixed.energies = Eigen::VectorXd::Zero(1);
  CHECK(entanglement_entropy(mixed) == doctest::Approx(std::log(2.0)));
}

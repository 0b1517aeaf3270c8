#pragma once

#include <cstdint>
#include <vector>

#include "entvir/model.hpp"

namespace entvir {

// 2L x 2L matrix of ground-state two-point functions on an interval of L
// sites, in the block layout
//
//   Gamma = [[ <a+_i a_j>, <a+_i a+_j> ],
//            [ <a_i a_j >, <a_i a+_j > ]]      i, j = 0..L-1.
//
// Hermitian with spectrum in [0, 1]; eigenvalues come in (nu, 1-nu) pairs
// mapped onto each other by (v, w) <-> (w*, v*).
struct CorrelationMatrix {
  Eigen::MatrixXcd gamma;

  Eigen::Index sites() const { return gamma.rows() / 2; }
  bool number_conserving() const;  // pairing blocks identically zero
  bool is_real() const;
};

CorrelationMatrix build_correlation_matrix(const ModelParams& params,
                                           long sites);

// Canonical transformation c_i = sum_j A_ij a_j + B_ij a+_j; the block matrix
// U = [[A, B], [B*, A*]] is unitary. Mode i annihilates with probability
// amplitude set by nu_i <= 1/2, and modes are ordered by increasing
// single-particle energy e_i (decreasing nu_i).
struct BogoliubovTransform {
  Eigen::MatrixXcd A, B;
  // +1/-1 per mode when the state is number conserving (hole modes flipped
  // by particle-hole), empty otherwise.
  std::vector<int> mode_charge;

  Eigen::Index modes() const { return A.rows(); }
  Eigen::MatrixXcd unitary() const;
};

// nu_i in (0, 1/2], energies e_i = log((1-nu_i)/nu_i) sorted ascending,
// log_norm = sum_i log(1 - nu_i) so that log Z = -log_norm.
struct SingleParticleSpectrum {
  Eigen::VectorXd nus;
  Eigen::VectorXd energies;
  double log_norm = 0.0;

  Eigen::Index modes() const { return nus.size(); }
};

struct DiagonalizeResult {
  BogoliubovTransform transform;
  SingleParticleSpectrum spectrum;
};

DiagonalizeResult diagonalize(const CorrelationMatrix& gamma);
// Values-only path; avoids storing eigenvectors of the big problem.
SingleParticleSpectrum single_particle_spectrum(const CorrelationMatrix& gamma);

// Occupation pattern J_alpha (sorted 0-based mode indices), entanglement
// energy E_alpha = (sum_{j in J} e_j - log_norm) / (2 pi) and Schmidt weight
// lambda^2 = exp(-2 pi E_alpha).
struct SchmidtState {
  std::vector<int> occupation;
  double energy = 0.0;
  double weight = 0.0;
  int index = 0;
};

// K lowest-energy occupation subsets by best-first search over the frontier
// ordered by partial sum; ties broken lexicographically on the index sets.
std::vector<SchmidtState> enumerate_schmidt(const SingleParticleSpectrum& sp,
                                            std::int64_t count);

// Von Neumann entropy in nats, sum of the mode binary entropies.
double entanglement_entropy(const SingleParticleSpectrum& sp);

}  // namespace entvir

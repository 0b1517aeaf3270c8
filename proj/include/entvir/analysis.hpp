#pragma once

#include <optional>

#include "entvir/cft.hpp"
#include "entvir/virasoro.hpp"

namespace entvir {

// Least-squares line through (log 2N, 1/gap); the UV parameter follows from
// 1/Delta = slope (log 2N - log epsilon).
struct EpsilonFit {
  std::vector<long> sizes;
  std::vector<double> gaps;
  double slope = 0.0;
  double intercept = 0.0;
  double epsilon = 0.0;
  std::vector<double> residuals;
};

EpsilonFit fit_epsilon(const std::vector<long>& sizes,
                       const std::vector<double>& gaps);

// h_alpha = (2l/pi)(E_alpha - E_1); invariant under a common shift of the
// entanglement energies.
std::vector<double> rescale_spectrum(const std::vector<SchmidtState>& states,
                                     double l);

struct SymmetryCharges {
  std::optional<int> u1_charge;  // only in the number-conserving case
  int z2_parity = +1;            // (-1)^|J|
};

SymmetryCharges symmetry_charges(const SchmidtState& state,
                                 const BogoliubovTransform& bt);

// Pairing of the K lowest lattice states with tower states: within each
// symmetry class (parity, and U(1) charge when available) states are matched
// in order of dimension; exact residual degeneracies are ordered by agreement
// of the H_1 matrix elements when tables are supplied. Dimensions further
// than 0.25 from their matched slot are reported, not fatal — the deviation
// is itself a finite-size effect.
struct StateMatching {
  std::vector<int> tower_index;       // per lattice state
  std::vector<double> deviations;     // |h_lattice - h_cft| per state
  std::vector<int> out_of_tolerance;  // lattice states deviating beyond 0.25
};

StateMatching match_states(const std::vector<double>& lattice_dims,
                           const std::vector<SymmetryCharges>& charges,
                           const cft::TowerSpectrum& tower, int count,
                           const Eigen::MatrixXcd* lattice_h1 = nullptr,
                           const Eigen::MatrixXd* tower_h1 = nullptr);

// Lattice table against the matched CFT table after the optimal diagonal
// phase gauge; corrections are the aligned residuals F^n.
struct ComparisonTable {
  int n = 0;
  Eigen::MatrixXcd lattice;      // raw gauge
  Eigen::MatrixXd cft;           // matched values, lattice ordering
  Eigen::VectorXcd gauge;
  Eigen::MatrixXcd aligned;      // D^+ lattice D
  Eigen::MatrixXcd corrections;  // aligned - cft
};

ComparisonTable finite_size_table(int n, const Eigen::MatrixXcd& lattice,
                                  const Eigen::MatrixXd& cft);

}  // namespace entvir

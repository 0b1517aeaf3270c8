#pragma once

#include "entvir/gaussian.hpp"

namespace entvir {

// Interval geometry for the weighted sums: 2N sites, bonds j = 0..2N-2 at
// x = j + 1 - N, momentum centers s = 1..2N-2 at x = s - N + 1/2, envelope
// (N^2 - x^2)/N and angle theta(x) = pi/2 - (pi/2l) log((N+x)/(N-x)) with
// l = log(2N/epsilon). The shifts allow alternative position assignments;
// the defaults reproduce the standard scheme.
struct LatticeProfile {
  long half_length = 0;  // N
  double epsilon = 0.0;
  double bond_shift = 0.0;
  double momentum_shift = 0.0;

  LatticeProfile(long n, double eps) : half_length(n), epsilon(eps) {
    if (n < 1 || !(eps > 0))
      throw std::invalid_argument("profile needs N >= 1 and epsilon > 0");
  }

  long sites() const { return 2 * half_length; }
  double l() const { return std::log(2.0 * half_length / epsilon); }
  double bond_position(long bond) const {
    return static_cast<double>(bond + 1 - half_length) + bond_shift;
  }
  double momentum_position(long center) const {
    return static_cast<double>(center - half_length) + 0.5 + momentum_shift;
  }
  double envelope(double x) const {
    const double n = static_cast<double>(half_length);
    return (n * n - x * x) / n;
  }
  double theta(double x) const;
};

// H_n = (l/pi) sum_bonds envelope(x) cos(n theta(x)) h_{j,j+1}, plus the
// additive constant (c/24)(1 + 4 l^2/pi^2) for n = 0.
QuadraticOperator build_Hn(const ModelParams& params,
                           const LatticeProfile& profile, int n);

// L_n adds i (l/pi) sum_centers envelope(x) sin(n theta(x)) p at the momentum
// centers; satisfies (L_n + L_{-n})/2 = H_n and adjoint(L_n) = L_{-n}.
QuadraticOperator build_Ln(const ModelParams& params,
                           const LatticeProfile& profile, int n);

// Conjugates the Nambu matrix by the canonical transformation, c = U a, and
// re-extracts the coefficients; the represented operator is unchanged and
// the new constant equals the expectation value in the mode vacuum.
QuadraticOperator to_entanglement_basis(const QuadraticOperator& op,
                                        const BogoliubovTransform& bt);
QuadraticOperator from_entanglement_basis(const QuadraticOperator& op,
                                          const BogoliubovTransform& bt);

// <bra| op |ket> for occupation states over the entanglement modes; nonzero
// only when the occupations differ in 0 or 2 modes, with the fermionic sign
// counted over occupied modes between the indices.
Complex matrix_element(const QuadraticOperator& op, const SchmidtState& bra,
                       const SchmidtState& ket);

Eigen::MatrixXcd matrix_element_table(const QuadraticOperator& op,
                                      const std::vector<SchmidtState>& states);

}  // namespace entvir

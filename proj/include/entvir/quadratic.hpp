#pragma once

#include <complex>
#include <Eigen/Dense>

namespace entvir {

using Complex = std::complex<double>;

enum class OperatorBasis { Site, EntanglementMode };

// Fermionic bilinear
//
//   O = E0 + sum_ij P_ij a+_i a_j
//          + 1/2 sum_ij Qc_ij a+_i a+_j + 1/2 sum_ij Qa_ij a_j a_i,
//
// with Qc, Qa antisymmetric. O is Hermitian iff P = P+, Qa = conj(Qc) and
// E0 is real; the Hamiltonian and momentum densities and the H_n satisfy
// this, while the L_n (n != 0) do not (adjoint(L_n) = L_{-n}).
//
// Internally the operator is handled through its Nambu (BdG) matrix
// M = [[P, Qc], [-Qa, -P^T]]: with alpha = (a, a+) one has
// O = 1/2 alpha+ M alpha + E0 + tr(P)/2, and both commutators and canonical
// basis changes act on M alone.
class QuadraticOperator {
 public:
  QuadraticOperator(OperatorBasis basis, Eigen::Index modes);

  OperatorBasis basis() const { return basis_; }
  Eigen::Index modes() const { return one_body.rows(); }

  Complex constant{0.0, 0.0};   // E0
  Eigen::MatrixXcd one_body;    // P
  Eigen::MatrixXcd pair_create; // Qc
  Eigen::MatrixXcd pair_annihilate; // Qa

  bool is_hermitian(double tol = 1e-12) const;
  QuadraticOperator adjoint() const;

  // Adds c * a+_i a_j and the coefficient's place in P.
  void add_hopping(Eigen::Index i, Eigen::Index j, Complex c);
  // Adds c * a+_i a+_j (+ nothing else); i != j.
  void add_pair_create(Eigen::Index i, Eigen::Index j, Complex c);
  // Adds c * a_i a_j; i != j.
  void add_pair_annihilate(Eigen::Index i, Eigen::Index j, Complex c);

  QuadraticOperator& operator+=(const QuadraticOperator& rhs);
  QuadraticOperator& operator*=(Complex z);

  // Nambu matrix [[P, Qc], [-Qa, -P^T]].
  Eigen::MatrixXcd bdg_matrix() const;
  // Rebuilds (E0, P, Qc, Qa) from a Nambu matrix and the scalar
  // s = E0 + tr(P)/2.
  static QuadraticOperator from_bdg(OperatorBasis basis,
                                    const Eigen::MatrixXcd& m, Complex s);

 private:
  OperatorBasis basis_;
};

QuadraticOperator operator+(QuadraticOperator lhs, const QuadraticOperator& rhs);
QuadraticOperator operator*(Complex z, QuadraticOperator op);

// [A, B], computed through the Nambu matrices. Anti-Hermitian for Hermitian
// inputs; callers wanting a Hermitian result use minus_i_commutator.
QuadraticOperator commutator(const QuadraticOperator& a,
                             const QuadraticOperator& b);
QuadraticOperator minus_i_commutator(const QuadraticOperator& a,
                                     const QuadraticOperator& b);

double max_coefficient_difference(const QuadraticOperator& a,
                                  const QuadraticOperator& b);

}  // namespace entvir

#include "entvir/quadratic.hpp"

#include <stdexcept>

namespace entvir {

QuadraticOperator::QuadraticOperator(OperatorBasis basis, Eigen::Index modes)
    : one_body(Eigen::MatrixXcd::Zero(modes, modes)),
      pair_create(Eigen::MatrixXcd::Zero(modes, modes)),
      pair_annihilate(Eigen::MatrixXcd::Zero(modes, modes)),
      basis_(basis) {}

bool QuadraticOperator::is_hermitian(double tol) const {
  const double scale = 1.0 + one_body.cwiseAbs().maxCoeff() +
                       pair_create.cwiseAbs().maxCoeff();
  if ((one_body - one_body.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    return false;
  if ((pair_annihilate - pair_create.conjugate()).cwiseAbs().maxCoeff() >
      tol * scale)
    return false;
  return std::abs(constant.imag()) <= tol * (1.0 + std::abs(constant));
}

QuadraticOperator QuadraticOperator::adjoint() const {
  QuadraticOperator out(basis_, modes());
  out.constant = std::conj(constant);
  out.one_body = one_body.adjoint();
  out.pair_create = pair_annihilate.conjugate();
  out.pair_annihilate = pair_create.conjugate();
  return out;
}

void QuadraticOperator::add_hopping(Eigen::Index i, Eigen::Index j, Complex c) {
  one_body(i, j) += c;
}

void QuadraticOperator::add_pair_create(Eigen::Index i, Eigen::Index j,
                                        Complex c) {
  if (i == j) throw std::invalid_argument("pair term needs distinct modes");
  pair_create(i, j) += c;
  pair_create(j, i) -= c;
}

void QuadraticOperator::add_pair_annihilate(Eigen::Index i, Eigen::Index j,
                                            Complex c) {
  if (i == j) throw std::invalid_argument("pair term needs distinct modes");
  // c * a_i a_j lands in Qa_ji; the 1/2 in front of the sum and the
  // antisymmetric image restore the full coefficient.
  pair_annihilate(j, i) += c;
  pair_annihilate(i, j) -= c;
}

QuadraticOperator& QuadraticOperator::operator+=(const QuadraticOperator& rhs) {
  if (rhs.basis_ != basis_ || rhs.modes() != modes())
    throw std::invalid_argument("operator basis/size mismatch");
  constant += rhs.constant;
  one_body += rhs.one_body;
  pair_create += rhs.pair_create;
  pair_annihilate += rhs.pair_annihilate;
  return *this;
}

QuadraticOperator& QuadraticOperator::operator*=(Complex z) {
  constant *= z;
  one_body *= z;
  pair_create *= z;
  pair_annihilate *= z;
  return *this;
}

Eigen::MatrixXcd QuadraticOperator::bdg_matrix() const {
  const Eigen::Index n = modes();
  Eigen::MatrixXcd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = one_body;
  m.topRightCorner(n, n) = pair_create;
  m.bottomLeftCorner(n, n) = -pair_annihilate;
  m.bottomRightCorner(n, n) = -one_body.transpose();
  return m;
}

QuadraticOperator QuadraticOperator::from_bdg(OperatorBasis basis,
                                              const Eigen::MatrixXcd& m,
                                              Complex s) {
  const Eigen::Index n = m.rows() / 2;
  QuadraticOperator out(basis, n);
  // Average the two redundant copies of P and enforce antisymmetry of the
  // pairing blocks; exact inputs pass through unchanged.
  out.one_body =
      0.5 * (m.topLeftCorner(n, n) - m.bottomRightCorner(n, n).transpose());
  out.pair_create =
      0.5 * (m.topRightCorner(n, n) - m.topRightCorner(n, n).transpose());
  out.pair_annihilate =
      0.5 * (m.bottomLeftCorner(n, n).transpose() - m.bottomLeftCorner(n, n));
  out.constant = s - 0.5 * out.one_body.trace();
  return out;
}

QuadraticOperator operator+(QuadraticOperator lhs,
                            const QuadraticOperator& rhs) {
  lhs += rhs;
  return lhs;
}

QuadraticOperator operator*(Complex z, QuadraticOperator op) {
  op *= z;
  return op;
}

QuadraticOperator commutator(const QuadraticOperator& a,
                             const QuadraticOperator& b) {
  if (a.basis() != b.basis() || a.modes() != b.modes())
    throw std::invalid_argument("operator basis/size mismatch");
  const Eigen::MatrixXcd ma = a.bdg_matrix();
  const Eigen::MatrixXcd mb = b.bdg_matrix();
  // [1/2 a+ M a, 1/2 a+ M' a] = 1/2 a+ [M, M'] a as operators; the scalar
  // part is carried entirely by the normal ordering of [M, M'].
  return QuadraticOperator::from_bdg(a.basis(), ma * mb - mb * ma,
                                     Complex{0.0, 0.0});
}

QuadraticOperator minus_i_commutator(const QuadraticOperator& a,
                                     const QuadraticOperator& b) {
  QuadraticOperator c = commutator(a, b);
  c *= Complex{0.0, -1.0};
  return c;
}

double max_coefficient_difference(const QuadraticOperator& a,
                                  const QuadraticOperator& b) {
  double m = std::abs(a.constant - b.constant);
  m = std::max(m, (a.one_body - b.one_body).cwiseAbs().maxCoeff());
  m = std::max(m, (a.pair_create - b.pair_create).cwiseAbs().maxCoeff());
  m = std::max(m,
               (a.pair_annihilate - b.pair_annihilate).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace entvir

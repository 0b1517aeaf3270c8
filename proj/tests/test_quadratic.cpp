#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "entvir/quadratic.hpp"

using namespace entvir;

namespace {

QuadraticOperator random_hermitian(std::mt19937& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QuadraticOperator op(OperatorBasis::Site, n);
  op.constant = Complex(u(rng), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    op.one_body(i, i) = Complex(u(rng), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex p{u(rng), u(rng)};
      op.one_body(i, j) = p;
      op.one_body(j, i) = std::conj(p);
      const Complex q{u(rng), u(rng)};
      op.add_pair_create(i, j, q);
      op.add_pair_annihilate(j, i, std::conj(q));
    }
  }
  return op;
}

}  // namespace

TEST_CASE("pair conventions put the full coefficient on the entry") {
  QuadraticOperator op(OperatorBasis::Site, 2);
  op.add_pair_create(0, 1, Complex(0.5, 0.0));
  CHECK(op.pair_create(0, 1) == Complex(0.5, 0.0));
  CHECK(op.pair_create(1, 0) == Complex(-0.5, 0.0));
}

TEST_CASE("hermiticity detection and adjoint involution") {
  std::mt19937 rng(7);
  const QuadraticOperator h = random_hermitian(rng, 4);
  CHECK(h.is_hermitian());
  CHECK(max_coefficient_difference(h, h.adjoint()) < 1e-15);

  QuadraticOperator skew = h;
  skew *= Complex(0.0, 1.0);
  CHECK_FALSE(skew.is_hermitian());
  CHECK(max_coefficient_difference(skew.adjoint(),
                                   Complex(-1.0, 0.0) * skew) < 1e-15);
}

TEST_CASE("bdg round trip preserves coefficients") {
  std::mt19937 rng(11);
  const QuadraticOperator h = random_hermitian(rng, 5);
  const QuadraticOperator back = QuadraticOperator::from_bdg(
      h.basis(), h.bdg_matrix(), h.constant + 0.5 * h.one_body.trace());
  CHECK(max_coefficient_difference(h, back) < 1e-14);
}

TEST_CASE("commutator is antisymmetric and kills constants") {
  std::mt19937 rng(3);
  const QuadraticOperator a = random_hermitian(rng, 4);
  QuadraticOperator b = random_hermitian(rng, 4);
  const QuadraticOperator ab = commutator(a, b);
  const QuadraticOperator ba = commutator(b, a);
  CHECK(max_coefficient_difference(ab, Complex(-1.0, 0.0) * ba) < 1e-13);

  b.constant += 17.0;
  CHECK(max_coefficient_difference(ab, commutator(a, b)) < 1e-13);

  CHECK(minus_i_commutator(a, b).is_hermitian(1e-12));
}

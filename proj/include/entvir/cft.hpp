#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

#include "entvir/model.hpp"

// Exact boundary-CFT reference data: Verma-module states over a primary of
// weight h at central charge c, Gram matrices from the Virasoro commutation
// relations, orthonormalized low-lying bases, and the matrix elements of the
// generators L_n in those bases. Everything is exact: rationals plus a single
// adjoined sqrt(2) (which enters through the normalization of L_{-2}|0> at
// c = 1).

namespace entvir::cft {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// coeff * sqrt(radicand) with radicand squarefree and positive.
struct ExactValue {
  Rational coeff{0};
  long radicand{1};

  bool is_zero() const { return coeff == 0; }
  double to_double() const;
};
bool operator==(const ExactValue& a, const ExactValue& b);
ExactValue operator+(const ExactValue& a, const ExactValue& b);
ExactValue operator*(const ExactValue& a, const ExactValue& b);
ExactValue exact_rational(const Rational& r);
// 1/sqrt(r) for positive rational r.
ExactValue inv_sqrt(const Rational& r);

// Descending parts m1 >= m2 >= ... denoting L_{-m1} L_{-m2} ... |h>.
using Partition = std::vector<int>;
// A state as a combination of partition monomials.
using VermaVector = std::map<Partition, Rational>;

class VermaModule {
 public:
  VermaModule(Rational h, Rational c) : h_(std::move(h)), c_(std::move(c)) {}

  const Rational& weight() const { return h_; }
  const Rational& central_charge() const { return c_; }

  // L_n applied to a state, normal-ordered back onto partition monomials.
  VermaVector apply(int n, const VermaVector& state) const;
  // <u|w>; zero when the levels differ.
  Rational inner(const VermaVector& u, const VermaVector& w) const;

 private:
  VermaVector apply_monomial(int n, const Partition& p) const;
  Rational h_, c_;
};

// Partitions of `level` in the canonical order [1,1,...] first, [level] last.
std::vector<Partition> partitions_of(int level);

// Exact Gram matrix over partitions_of(level) for the Verma module (h, c).
std::vector<std::vector<Rational>> gram_matrix(const Rational& h,
                                               const Rational& c, int level);

struct TowerState {
  int module = 0;
  Rational primary_h;
  int charge = 0;   // U(1) label, 0 in the Ising tower
  int parity = +1;  // fermion parity carried on the lattice side
  int level = 0;
  VermaVector vec;  // unnormalized Gram-Schmidt vector
  Rational norm2;
  Rational dimension;  // primary_h + level
};

struct TowerSpectrum {
  UniversalityClass model_class = UniversalityClass::None;
  Rational c;
  std::vector<VermaModule> modules;
  std::vector<TowerState> states;  // ordered by (dimension, module, level)
};

// Neumann Ising boundary spectrum: identity and energy towers at c = 1/2.
TowerSpectrum ising_neumann_tower(const Rational& max_dimension);
// Dirichlet boson at compactification radius 1: vertex modules of weight
// q^2/2 glued by the U(1) charge, plus the current primary at h = 1.
TowerSpectrum boson_dirichlet_tower(const Rational& max_dimension);
TowerSpectrum tower_for(UniversalityClass cls, const Rational& max_dimension);

struct ExactTable {
  std::vector<std::vector<ExactValue>> entries;

  int size() const { return static_cast<int>(entries.size()); }
  Eigen::MatrixXd to_double() const;
  std::string to_json() const;
};
bool operator==(const ExactTable& a, const ExactTable& b);

// <v_i| L_n |v_j> over the first K tower states.
ExactTable ln_table(const TowerSpectrum& tower, int n, int K);
// (L_n + L_{-n}) / 2.
ExactTable hn_table(const TowerSpectrum& tower, int n, int K);

}  // namespace entvir::cft

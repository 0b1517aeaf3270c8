#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entvir/cft.hpp"
#include "entvir/errors.hpp"

using namespace entvir;
using namespace entvir::cft;

namespace {

Rational det(std::vector<std::vector<Rational>> m) {
  const size_t n = m.size();
  Rational sign = 1, result = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      sign = -sign;
    }
    result *= m[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      const Rational f = m[r][col] / m[col][col];
      for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return sign * result;
}

ExactValue rat(long num, long den = 1) { return {Rational(num, den), 1}; }

void check_table(const ExactTable& got,
                 const std::vector<std::tuple<int, int, ExactValue>>& nonzero) {
  const int k = got.size();
  std::vector<std::vector<ExactValue>> want(k, std::vector<ExactValue>(k));
  for (const auto& [i, j, v] : nonzero) want[i - 1][j - 1] = v;  // 1-based
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      INFO("entry (" << i + 1 << "," << j + 1 << ")");
      CHECK(got.entries[i][j] == want[i][j]);
    }
}

}  // namespace

TEST_CASE("partition order puts L_{-1} strings first") {
  const auto p3 = partitions_of(3);
  REQUIRE(p3.size() == 3);
  CHECK(p3[0] == Partition{1, 1, 1});
  CHECK(p3[1] == Partition{2, 1});
  CHECK(p3[2] == Partition{3});
}

TEST_CASE("gram matrices reproduce the known norms and nulls") {
  // <L_{-1} eps | L_{-1} eps> = 2h = 1.
  const auto g1 = gram_matrix(Rational(1, 2), Rational(1, 2), 1);
  CHECK(g1[0][0] == Rational(1));

  // <L_{-2} 1 | L_{-2} 1> = c/2 = 1/4; L_{-1}^2 |0> is null.
  const auto g2 = gram_matrix(Rational(0), Rational(1, 2), 2);
  CHECK(g2[1][1] == Rational(1, 4));
  CHECK(g2[0][0] == Rational(0));

  // L_{-1}|0> is null for any c.
  CHECK(gram_matrix(Rational(0), Rational(1, 2), 1)[0][0] == Rational(0));
  CHECK(gram_matrix(Rational(0), Rational(1), 1)[0][0] == Rational(0));

  // The level-2 energy-tower Gram at the Ising point is singular: the null
  // combination (L_{-2} - 3/4 L_{-1}^2)|eps>.
  const auto ge = gram_matrix(Rational(1, 2), Rational(1, 2), 2);
  CHECK(det(ge) == Rational(0));
  CHECK(ge[0][0] == Rational(4));
  CHECK(ge[0][1] == Rational(3));
  CHECK(ge[1][1] == Rational(9, 4));

  CHECK_THROWS_AS(gram_matrix(Rational(0), Rational(1), 7),
                  std::invalid_argument);
}

TEST_CASE("gram matrices are positive semidefinite at the unitary points") {
  // The unitary highest weights actually used by the towers: h in {0, 1/2}
  // at c = 1/2, and any of the h >= 0 vertex weights at c = 1.
  std::vector<std::pair<Rational, std::vector<Rational>>> points = {
      {Rational(1, 2), {Rational(0), Rational(1, 2)}},
      {Rational(1),
       {Rational(0), Rational(1, 2), Rational(1), Rational(2)}}};
  for (const auto& [c, hs] : points) {
    for (const Rational& h : hs) {
      for (int level = 1; level <= 6; ++level) {
        const auto g = gram_matrix(h, c, level);
        const int n = static_cast<int>(g.size());
        Eigen::MatrixXd gd(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            gd(i, j) = static_cast<double>(g[i][j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gd);
        CHECK(es.eigenvalues().minCoeff() >=
              -1e-9 * (1.0 + gd.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("virasoro commutation holds entry-exact on the computed window") {
  for (const auto& [h, c] :
       {std::pair{Rational(1, 2), Rational(1, 2)},
        std::pair{Rational(0), Rational(1)},
        std::pair{Rational(1, 2), Rational(1)}}) {
    const VermaModule mod(h, c);
    for (int level = 0; level <= 3; ++level) {
      for (const Partition& p : partitions_of(level)) {
        const VermaVector v{{p, Rational(1)}};
        for (int n = -2; n <= 2; ++n) {
          for (int m = -2; m <= 2; ++m) {
            VermaVector lhs = mod.apply(n, mod.apply(m, v));
            for (const auto& [q, coeff] : mod.apply(m, mod.apply(n, v))) {
              lhs[q] -= coeff;
              if (lhs[q] == 0) lhs.erase(q);
            }
            VermaVector rhs;
            for (const auto& [q, coeff] : mod.apply(n + m, v)) {
              rhs[q] = Rational(n - m) * coeff;
              if (rhs[q] == 0) rhs.erase(q);
            }
            if (n + m == 0) {
              const Rational central =
                  c / 12 * Rational(n) * Rational((long)n * n - 1);
              for (const auto& [q, coeff] : v) {
                rhs[q] += central * coeff;
                if (rhs[q] == 0) rhs.erase(q);
              }
            }
            CHECK(lhs == rhs);
          }
        }
      }
    }
  }
}

TEST_CASE("ising tower lists the seven printed fields") {
  const TowerSpectrum tower = ising_neumann_tower(Rational(7, 2));
  REQUIRE(tower.states.size() == 7);
  const std::vector<Rational> dims = {Rational(0),     Rational(1, 2),
                                      Rational(3, 2),  Rational(2),
                                      Rational(5, 2),  Rational(3),
                                      Rational(7, 2)};
  const std::vector<int> modules = {0, 1, 1, 0, 1, 0, 1};
  for (int i = 0; i < 7; ++i) {
    CHECK(tower.states[i].dimension == dims[i]);
    CHECK(tower.states[i].module == modules[i]);
    CHECK(tower.states[i].parity == (modules[i] == 0 ? +1 : -1));
  }
  // Window to dimension 4 adds the two level-4 identity descendants.
  const TowerSpectrum wide = ising_neumann_tower(Rational(4));
  REQUIRE(wide.states.size() == 9);
  CHECK(wide.states[7].dimension == Rational(4));
  CHECK(wide.states[8].dimension == Rational(4));
}

TEST_CASE("boson tower lists the seven printed fields with charges") {
  const TowerSpectrum tower = boson_dirichlet_tower(Rational(2));
  REQUIRE(tower.states.size() >= 7);
  const std::vector<Rational> dims = {Rational(0),    Rational(1, 2),
                                      Rational(1, 2), Rational(1),
                                      Rational(3, 2), Rational(3, 2),
                                      Rational(2)};
  const std::vector<int> charges = {0, 1, -1, 0, 1, -1, 0};
  for (int i = 0; i < 7; ++i) {
    CHECK(tower.states[i].dimension == dims[i]);
    CHECK(tower.states[i].charge == charges[i]);
  }
  // v7 is the stress-tensor state in the vacuum module.
  CHECK(tower.states[6].module == 0);
  CHECK(tower.states[6].level == 2);
  // Four states share dimension 2: L_{-2}1, L_{-1}(idphi), e^{+-2iphi}.
  int at_two = 0;
  for (const auto& st : tower.states)
    if (st.dimension == Rational(2)) ++at_two;
  CHECK(at_two == 4);
}

TEST_CASE("ising L and H tables match the printed matrices exactly") {
  const TowerSpectrum tower = ising_neumann_tower(Rational(7, 2));

  check_table(ln_table(tower, 1, 7),
              {{2, 3, rat(1)}, {3, 5, rat(2)}, {4, 6, rat(2)}, {5, 7, rat(3)}});
  check_table(ln_table(tower, -1, 7),
              {{3, 2, rat(1)}, {5, 3, rat(2)}, {6, 4, rat(2)}, {7, 5, rat(3)}});
  check_table(ln_table(tower, 2, 7),
              {{1, 4, rat(1, 2)}, {2, 5, rat(3, 2)}, {3, 7, rat(5, 2)}});
  check_table(ln_table(tower, -2, 7),
              {{4, 1, rat(1, 2)}, {5, 2, rat(3, 2)}, {7, 3, rat(5, 2)}});

  check_table(hn_table(tower, 1, 7), {{2, 3, rat(1, 2)},
                                      {3, 2, rat(1, 2)},
                                      {3, 5, rat(1)},
                                      {5, 3, rat(1)},
                                      {4, 6, rat(1)},
                                      {6, 4, rat(1)},
                                      {5, 7, rat(3, 2)},
                                      {7, 5, rat(3, 2)}});
  check_table(hn_table(tower, 2, 7), {{1, 4, rat(1, 4)},
                                      {4, 1, rat(1, 4)},
                                      {2, 5, rat(3, 4)},
                                      {5, 2, rat(3, 4)},
                                      {3, 7, rat(5, 4)},
                                      {7, 3, rat(5, 4)}});

  // L_0 is diagonal with the conformal dimensions.
  const ExactTable l0 = ln_table(tower, 0, 7);
  for (int i = 0; i < 7; ++i)
    CHECK(l0.entries[i][i] ==
          ExactValue(tower.states[i].dimension, 1));
}

TEST_CASE("boson L tables match the printed matrices exactly") {
  const TowerSpectrum tower = boson_dirichlet_tower(Rational(2));

  check_table(ln_table(tower, 1, 7), {{2, 5, rat(1)}, {3, 6, rat(1)}});
  check_table(ln_table(tower, -1, 7), {{5, 2, rat(1)}, {6, 3, rat(1)}});
  // 1/sqrt(2) = (1/2) sqrt(2).
  check_table(ln_table(tower, 2, 7),
              {{1, 7, ExactValue(Rational(1, 2), 2)}});
  check_table(ln_table(tower, -2, 7),
              {{7, 1, ExactValue(Rational(1, 2), 2)}});
}

TEST_CASE("ln tables transpose under n -> -n") {
  for (const auto cls : {UniversalityClass::Ising, UniversalityClass::Boson}) {
    const TowerSpectrum tower = tower_for(cls, Rational(3));
    const int k = static_cast<int>(tower.states.size());
    for (int n : {1, 2}) {
      const ExactTable a = ln_table(tower, n, k);
      const ExactTable b = ln_table(tower, -n, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) CHECK(a.entries[i][j] == b.entries[j][i]);
    }
  }
}

TEST_CASE("exact tables serialize rationals and the sqrt-2 coefficient") {
  const TowerSpectrum tower = boson_dirichlet_tower(Rational(2));
  const std::string json = ln_table(tower, 2, 7).to_json();
  CHECK(json.find("\"sqrt2_num\":1,\"sqrt2_den\":2") != std::string::npos);
  const std::string ising_json =
      hn_table(ising_neumann_tower(Rational(7, 2)), 2, 7).to_json();
  CHECK(ising_json.find("\"num\":1,\"den\":4") != std::string::npos);
}

TEST_CASE("exact scalar arithmetic keeps radicands square-free") {
  const ExactValue a{Rational(1, 2), 2};
  const ExactValue b = a * a;  // 1/4 * 2 = 1/2 rational
  CHECK(b == ExactValue(Rational(1, 2), 1));
  CHECK(inv_sqrt(Rational(1, 2)) == ExactValue(Rational(1), 2));
  CHECK(inv_sqrt(Rational(4)) == ExactValue(Rational(1, 2), 1));
  CHECK(inv_sqrt(Rational(9, 2)) == ExactValue(Rational(1, 3), 2));
  const ExactValue r2{Rational(1), 2};
  const ExactValue r3{Rational(1), 3};
  CHECK_THROWS_AS((void)(r2 + r3), entvir::numeric_error);
}

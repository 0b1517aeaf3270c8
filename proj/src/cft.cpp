#include "entvir/cft.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "entvir/errors.hpp"

namespace entvir::cft {

namespace {

int level_of(const Partition& p) {
  int s = 0;
  for (int m : p) s += m;
  return s;
}

void accumulate(VermaVector& into, const VermaVector& from, const Rational& w) {
  if (w == 0) return;
  for (const auto& [p, coeff] : from) {
    Rational& slot = into[p];
    slot += coeff * w;
    if (slot == 0) into.erase(p);
  }
}

// x = s^2 * m with m squarefree.
void squarefree_split(Integer x, Integer& s, Integer& m) {
  s = 1;
  m = 1;
  for (Integer p = 2; p * p <= x; ++p) {
    while (x % (p * p) == 0) {
      x /= p * p;
      s *= p;
    }
    if (x % p == 0) {
      x /= p;
      m *= p;
    }
  }
  m *= x;
}

}  // namespace

double ExactValue::to_double() const {
  return static_cast<double>(coeff) *
         std::sqrt(static_cast<double>(radicand));
}

bool operator==(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.coeff == b.coeff && a.radicand == b.radicand;
}

ExactValue operator+(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.radicand != b.radicand)
    throw numeric_error("exact sum leaves the tracked radical field");
  ExactValue out{a.coeff + b.coeff, a.radicand};
  if (out.coeff == 0) out.radicand = 1;
  return out;
}

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Integer s, m;
  squarefree_split(Integer(a.radicand) * Integer(b.radicand), s, m);
  return {a.coeff * b.coeff * Rational(s), static_cast<long>(m)};
}

ExactValue exact_rational(const Rational& r) { return {r, 1}; }

ExactValue inv_sqrt(const Rational& r) {
  if (r <= 0) throw std::invalid_argument("inv_sqrt needs a positive rational");
  // 1/sqrt(p/q) = sqrt(pq)/p.
  const Integer p = numerator(r), q = denominator(r);
  Integer s, m;
  squarefree_split(p * q, s, m);
  return {Rational(s, p), static_cast<long>(m)};
}

VermaVector VermaModule::apply(int n, const VermaVector& state) const {
  VermaVector out;
  for (const auto& [p, coeff] : state)
    accumulate(out, apply_monomial(n, p), coeff);
  return out;
}

VermaVector VermaModule::apply_monomial(int n, const Partition& p) const {
  if (n == 0) {
    return {{p, h_ + level_of(p)}};
  }
  if (p.empty()) {
    if (n > 0) return {};        // L_n |h> = 0
    return {{{-n}, Rational(1)}};  // canonical single-mode monomial
  }
  const int m1 = p.front();
  if (n < 0 && -n >= m1) {
    Partition q;
    q.reserve(p.size() + 1);
    q.push_back(-n);
    q.insert(q.end(), p.begin(), p.end());
    return {{q, Rational(1)}};
  }
  // L_n L_{-m1} = L_{-m1} L_n + (n + m1) L_{n - m1}
  //               + delta_{n, m1} (c/12) n (n^2 - 1).
  const Partition tail(p.begin() + 1, p.end());
  VermaVector out = apply(-m1, apply_monomial(n, tail));
  accumulate(out, apply_monomial(n - m1, tail), Rational(n + m1));
  if (n == m1) {
    const Rational central =
        c_ / 12 * Rational(n) * Rational(Integer(n) * n - 1);
    accumulate(out, {{tail, Rational(1)}}, central);
  }
  return out;
}

Rational VermaModule::inner(const VermaVector& u, const VermaVector& w) const {
  Rational total = 0;
  for (const auto& [p, coeff] : u) {
    // <h| L_{m_k} ... L_{m_1} |w>, the adjoint of the monomial applied
    // rightmost-first, i.e. largest part first.
    VermaVector s = w;
    for (int m : p) s = apply(m, s);
    auto it = s.find(Partition{});
    if (it != s.end()) total += coeff * it->second;
  }
  return total;
}

std::vector<Partition> partitions_of(int level) {
  // Descending tuples, sorted ascending lexicographically so [1,1,...] comes
  // first and [level] last; Gram-Schmidt in this order reproduces the
  // explicit low-lying fields of both towers.
  std::vector<Partition> out;
  Partition current;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      self(self, remaining - part, part);
      current.pop_back();
    }
  };
  rec(rec, level, level);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Rational>> gram_matrix(const Rational& h,
                                               const Rational& c, int level) {
  if (level < 0 || level > 6)
    throw std::invalid_argument("gram_matrix supports levels 0..6");
  const VermaModule mod(h, c);
  const auto parts = partitions_of(level);
  const size_t n = parts.size();
  std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i) {
    const VermaVector vi{{parts[i], Rational(1)}};
    for (size_t j = i; j < n; ++j) {
      const VermaVector vj{{parts[j], Rational(1)}};
      g[i][j] = mod.inner(vi, vj);
      g[j][i] = g[i][j];
    }
  }
  return g;
}

namespace {

struct ModuleSpec {
  Rational h;
  int charge;
  int parity;
};

TowerSpectrum build_tower(UniversalityClass cls, const Rational& c,
                          const std::vector<ModuleSpec>& specs,
                          const Rational& max_dimension) {
  TowerSpectrum tower;
  tower.model_class = cls;
  tower.c = c;
  for (size_t m = 0; m < specs.size(); ++m)
    tower.modules.emplace_back(specs[m].h, c);

  for (size_t m = 0; m < specs.size(); ++m) {
    const ModuleSpec& spec = specs[m];
    const VermaModule& mod = tower.modules[m];
    for (int level = 0; Rational(spec.h + level) <= max_dimension; ++level) {
      std::vector<TowerState> accepted;
      for (const Partition& p : partitions_of(level)) {
        VermaVector v{{p, Rational(1)}};
        for (const TowerState& u : accepted) {
          const Rational overlap = mod.inner(u.vec, v);
          accumulate(v, u.vec, -overlap / u.norm2);
        }
        const Rational n2 = mod.inner(v, v);
        if (n2 == 0) continue;  // null direction, dropped
        if (n2 < 0)
          throw numeric_error("negative-norm state in Verma tower");
        TowerState st;
        st.module = static_cast<int>(m);
        st.primary_h = spec.h;
        st.charge = spec.charge;
        st.parity = spec.parity;
        st.level = level;
        st.vec = std::move(v);
        st.norm2 = n2;
        st.dimension = spec.h + level;
        accepted.push_back(std::move(st));
      }
      for (auto& st : accepted) tower.states.push_back(std::move(st));
    }
  }
  std::stable_sort(tower.states.begin(), tower.states.end(),
                   [](const TowerState& a, const TowerState& b) {
                     return a.dimension < b.dimension;
                   });
  return tower;
}

}  // namespace

TowerSpectrum ising_neumann_tower(const Rational& max_dimension) {
  return build_tower(UniversalityClass::Ising, Rational(1, 2),
                     {{Rational(0), 0, +1}, {Rational(1, 2), 0, -1}},
                     max_dimension);
}

TowerSpectrum boson_dirichlet_tower(const Rational& max_dimension) {
  return build_tower(UniversalityClass::Boson, Rational(1),
                     {{Rational(0), 0, +1},
                      {Rational(1, 2), +1, -1},
                      {Rational(1, 2), -1, -1},
                      {Rational(1), 0, +1},
                      {Rational(2), +2, +1},
                      {Rational(2), -2, +1}},
                     max_dimension);
}

TowerSpectrum tower_for(UniversalityClass cls, const Rational& max_dimension) {
  switch (cls) {
    case UniversalityClass::Ising:
      return ising_neumann_tower(max_dimension);
    case UniversalityClass::Boson:
      return boson_dirichlet_tower(max_dimension);
    default:
      throw std::invalid_argument("no conformal tower for a non-critical model");
  }
}

Eigen::MatrixXd ExactTable::to_double() const {
  const int k = size();
  Eigen::MatrixXd out(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out(i, j) = entries[i][j].to_double();
  return out;
}

std::string ExactTable::to_json() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < size(); ++i) {
    if (i) os << ",";
    os << "[";
    for (int j = 0; j < size(); ++j) {
      if (j) os << ",";
      const ExactValue& v = entries[i][j];
      Rational rat = v.radicand == 1 ? v.coeff : Rational(0);
      Rational s2 = v.radicand == 2 ? v.coeff : Rational(0);
      if (v.radicand != 1 && v.radicand != 2 && !v.is_zero())
        throw numeric_error("exact table entry outside Q(sqrt 2)");
      os << "{\"num\":" << numerator(rat) << ",\"den\":" << denominator(rat)
         << ",\"sqrt2_num\":" << numerator(s2)
         << ",\"sqrt2_den\":" << denominator(s2) << "}";
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

bool operator==(const ExactTable& a, const ExactTable& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      if (!(a.entries[i][j] == b.entries[i][j])) return false;
  return true;
}

ExactTable ln_table(const TowerSpectrum& tower, int n, int K) {
  if (K < 1 || K > static_cast<int>(tower.states.size()))
    throw std::invalid_argument("table size exceeds the computed tower window");
  ExactTable table;
  table.entries.assign(K, std::vector<ExactValue>(K));
  for (int j = 0; j < K; ++j) {
    const TowerState& ket = tower.states[j];
    const VermaModule& mod = tower.modules[ket.module];
    const VermaVector moved = mod.apply(n, ket.vec);
    if (moved.empty()) continue;
    for (int i = 0; i < K; ++i) {
      const TowerState& bra = tower.states[i];
      if (bra.module != ket.module) continue;
      if (bra.level != ket.level - n) continue;
      const Rational raw = mod.inner(bra.vec, moved);
      if (raw == 0) continue;
      table.entries[i][j] =
          exact_rational(raw) * inv_sqrt(bra.norm2 * ket.norm2);
    }
  }
  return table;
}

ExactTable hn_table(const TowerSpectrum& tower, int n, int K) {
  const ExactTable plus = ln_table(tower, n, K);
  const ExactTable minus = ln_table(tower, -n, K);
  ExactTable out;
  out.entries.assign(K, std::vector<ExactValue>(K));
  const ExactValue half{Rational(1, 2), 1};
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      out.entries[i][j] = half * (plus.entries[i][j] + minus.entries[i][j]);
  return out;
}

}  // namespace entvir::cft

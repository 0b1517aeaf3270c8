#include "entvir/virasoro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace entvir {

namespace {

constexpr double kPi = std::numbers::pi;

// Two-site density terms accumulated in place so the weighted sums never
// materialize per-bond operators.
void add_scaled_bond(QuadraticOperator& op, const ModelParams& p, long j,
                     double e0, Complex w) {
  const double s = p.velocity_rescale;
  op.add_hopping(j + 1, j, 0.5 * s * w);
  op.add_hopping(j, j + 1, 0.5 * s * w);
  op.add_hopping(j, j, -0.5 * p.lambda * s * w);
  op.add_hopping(j + 1, j + 1, -0.5 * p.lambda * s * w);
  if (p.gamma != 0.0) {
    op.add_pair_create(j, j + 1, 0.5 * p.gamma * s * w);
    op.add_pair_annihilate(j + 1, j, 0.5 * p.gamma * s * w);
  }
  op.constant += -e0 * w;
}

void add_scaled_momentum(QuadraticOperator& op, const ModelParams& p, long c,
                         Complex w) {
  const double s = p.velocity_rescale * p.velocity_rescale;
  const double lam = p.lambda, gam = p.gamma;
  const Complex i4{0.0, 0.25 * s};
  auto hop_pair = [&](long a, long b, Complex base) {
    // (base a+_a a_b + conj(base) a+_b a_a) * w
    op.add_hopping(a, b, base * w);
    op.add_hopping(b, a, std::conj(base) * w);
  };
  hop_pair(c + 1, c - 1, (1.0 - gam * gam) * i4);
  hop_pair(c, c - 1, -lam * i4);
  hop_pair(c + 1, c, -lam * i4);
  if (gam != 0.0 && lam != 0.0) {
    const Complex b = gam * lam * i4;
    op.add_pair_annihilate(c, c - 1, b * w);
    op.add_pair_create(c - 1, c, std::conj(b) * w);
    op.add_pair_annihilate(c + 1, c, -b * w);
    op.add_pair_create(c, c + 1, -std::conj(b) * w);
  }
}

double hn_constant(const ModelParams& params, const LatticeProfile& profile) {
  const double l = profile.l();
  return params.central_charge / 24.0 * (1.0 + 4.0 * l * l / (kPi * kPi));
}

}  // namespace

double LatticeProfile::theta(double x) const {
  const double n = static_cast<double>(half_length);
  return 0.5 * kPi - 0.5 * kPi / l() * std::log((n + x) / (n - x));
}

QuadraticOperator build_Hn(const ModelParams& params,
                           const LatticeProfile& profile, int n) {
  if (n < 0) throw std::invalid_argument("build_Hn needs n >= 0");
  const long sites = profile.sites();
  QuadraticOperator op(OperatorBasis::Site, sites);
  const double e0 = ground_energy_density(params);
  const double pref = profile.l() / kPi;
  for (long b = 0; b + 1 < sites; ++b) {
    const double x = profile.bond_position(b);
    const double w =
        pref * profile.envelope(x) * std::cos(n * profile.theta(x));
    add_scaled_bond(op, params, b, e0, Complex{w, 0.0});
  }
  if (n == 0) op.constant += hn_constant(params, profile);
  return op;
}

QuadraticOperator build_Ln(const ModelParams& params,
                           const LatticeProfile& profile, int n) {
  const long sites = profile.sites();
  QuadraticOperator op(OperatorBasis::Site, sites);
  const double e0 = ground_energy_density(params);
  const double pref = profile.l() / kPi;
  for (long b = 0; b + 1 < sites; ++b) {
    const double x = profile.bond_position(b);
    const double w =
        pref * profile.envelope(x) * std::cos(n * profile.theta(x));
    add_scaled_bond(op, params, b, e0, Complex{w, 0.0});
  }
  if (n == 0) {
    op.constant += hn_constant(params, profile);
    return op;
  }
  // The sign of the momentum term fixes which of L_{+n}, L_{-n} lowers the
  // entanglement energy; with the fermion conventions used here the lowering
  // choice (matching the exact tower matrices) needs -i sin(n theta) p.
  for (long c = 1; c + 1 < sites; ++c) {
    const double x = profile.momentum_position(c);
    const double w =
        pref * profile.envelope(x) * std::sin(n * profile.theta(x));
    add_scaled_momentum(op, params, c, Complex{0.0, -w});
  }
  return op;
}

namespace {

QuadraticOperator conjugate_by(const QuadraticOperator& op,
                               const Eigen::MatrixXcd& u, OperatorBasis to) {
  const Eigen::Index n = op.modes();
  const Complex scalar = op.constant + 0.5 * op.one_body.trace();
  Eigen::MatrixXcd m = op.bdg_matrix();
  const bool realish = m.imag().cwiseAbs().maxCoeff() == 0.0 &&
                       u.imag().cwiseAbs().maxCoeff() == 0.0;
  Eigen::MatrixXcd transformed;
  if (realish) {
    const Eigen::MatrixXd ur = u.real(), mr = m.real();
    transformed = (ur * mr * ur.transpose()).cast<Complex>();
  } else {
    transformed = u * m * u.adjoint();
  }
  (void)n;
  return QuadraticOperator::from_bdg(to, transformed, scalar);
}

}  // namespace

QuadraticOperator to_entanglement_basis(const QuadraticOperator& op,
                                        const BogoliubovTransform& bt) {
  if (op.modes() != bt.modes())
    throw std::invalid_argument("operator/transform dimension mismatch");
  return conjugate_by(op, bt.unitary(), OperatorBasis::EntanglementMode);
}

QuadraticOperator from_entanglement_basis(const QuadraticOperator& op,
                                          const BogoliubovTransform& bt) {
  if (op.modes() != bt.modes())
    throw std::invalid_argument("operator/transform dimension mismatch");
  return conjugate_by(op, bt.unitary().adjoint(), OperatorBasis::Site);
}

namespace {

int count_below(const std::vector<int>& sorted, int x) {
  return static_cast<int>(
      std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

double sign_pm(int count) { return count % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

Complex matrix_element(const QuadraticOperator& op, const SchmidtState& bra,
                       const SchmidtState& ket) {
  const std::vector<int>& J = ket.occupation;
  const std::vector<int>& I = bra.occupation;
  std::vector<int> only_ket, only_bra;
  std::set_difference(J.begin(), J.end(), I.begin(), I.end(),
                      std::back_inserter(only_ket));
  std::set_difference(I.begin(), I.end(), J.begin(), J.end(),
                      std::back_inserter(only_bra));
  const size_t diff = only_ket.size() + only_bra.size();

  if (diff == 0) {
    Complex val = op.constant;
    for (int i : J) val += op.one_body(i, i);
    return val;
  }
  if (diff != 2) return Complex{0.0, 0.0};

  if (only_ket.size() == 1) {
    // c+_i c_j with j removed from the ket, i added.
    const int j = only_ket[0], i = only_bra[0];
    double s = sign_pm(count_below(J, j));
    std::vector<int> without_j = J;
    without_j.erase(std::find(without_j.begin(), without_j.end(), j));
    s *= sign_pm(count_below(without_j, i));
    return op.one_body(i, j) * s;
  }
  if (only_bra.size() == 2) {
    // pair creation, bra = ket + {p, q} with p < q.
    const int p = only_bra[0], q = only_bra[1];
    double s = sign_pm(count_below(J, q));
    std::vector<int> with_q = J;
    with_q.insert(std::upper_bound(with_q.begin(), with_q.end(), q), q);
    s *= sign_pm(count_below(with_q, p));
    return op.pair_create(p, q) * s;
  }
  // pair annihilation, bra = ket - {p, q} with p < q.
  const int p = only_ket[0], q = only_ket[1];
  double s = sign_pm(count_below(J, p));
  std::vector<int> without_p = J;
  without_p.erase(std::find(without_p.begin(), without_p.end(), p));
  s *= sign_pm(count_below(without_p, q));
  return op.pair_annihilate(p, q) * s;
}

Eigen::MatrixXcd matrix_element_table(const QuadraticOperator& op,
                                      const std::vector<SchmidtState>& states) {
  const int k = static_cast<int>(states.size());
  Eigen::MatrixXcd t(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) t(a, b) = matrix_element(op, states[a], states[b]);
  return t;
}

}  // namespace entvir

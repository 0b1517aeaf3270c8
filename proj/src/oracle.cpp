#include "entvir/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "eigs.hpp"
#include "entvir/errors.hpp"

namespace entvir::oracle {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double jw_sign(unsigned mask, int j) {
  const unsigned below = mask & ((1u << j) - 1u);
  return std::popcount(below) % 2 == 0 ? 1.0 : -1.0;
}

void check_sites(long sites) {
  if (sites < 1 || sites > kMaxSites)
    throw std::invalid_argument("dense oracle supports 1..12 sites");
}

VectorXcd apply_a(int j, const VectorXcd& v) {
  const long dim = v.size();
  VectorXcd out = VectorXcd::Zero(dim);
  const unsigned bit = 1u << j;
  for (long m = 0; m < dim; ++m) {
    const unsigned mask = static_cast<unsigned>(m);
    if (mask & bit) out[m ^ bit] += jw_sign(mask, j) * v[m];
  }
  return out;
}

VectorXcd apply_adag(int j, const VectorXcd& v) {
  const long dim = v.size();
  VectorXcd out = VectorXcd::Zero(dim);
  const unsigned bit = 1u << j;
  for (long m = 0; m < dim; ++m) {
    const unsigned mask = static_cast<unsigned>(m);
    if (!(mask & bit)) out[m | bit] += jw_sign(mask, j) * v[m];
  }
  return out;
}

VectorXcd apply_c(const BogoliubovTransform& bt, int k, const VectorXcd& v) {
  const int L = static_cast<int>(bt.modes());
  VectorXcd out = VectorXcd::Zero(v.size());
  for (int j = 0; j < L; ++j) {
    if (bt.A(k, j) != 0.0) out += bt.A(k, j) * apply_a(j, v);
    if (bt.B(k, j) != 0.0) out += bt.B(k, j) * apply_adag(j, v);
  }
  return out;
}

VectorXcd apply_cdag(const BogoliubovTransform& bt, int k, const VectorXcd& v) {
  const int L = static_cast<int>(bt.modes());
  VectorXcd out = VectorXcd::Zero(v.size());
  for (int j = 0; j < L; ++j) {
    if (bt.B(k, j) != 0.0) out += std::conj(bt.B(k, j)) * apply_a(j, v);
    if (bt.A(k, j) != 0.0) out += std::conj(bt.A(k, j)) * apply_adag(j, v);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd densify(const QuadraticOperator& op) {
  const long L = op.modes();
  check_sites(L);
  const long dim = 1L << L;
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  out.diagonal().setConstant(op.constant);

  for (long i = 0; i < L; ++i) {
    for (long j = 0; j < L; ++j) {
      const unsigned bi = 1u << i, bj = 1u << j;
      const Complex p = op.one_body(i, j);
      if (p != 0.0) {
        for (long m = 0; m < dim; ++m) {
          const unsigned mask = static_cast<unsigned>(m);
          if (!(mask & bj)) continue;
          const unsigned mid = mask ^ bj;
          if (mid & bi) continue;
          const double s = jw_sign(mask, static_cast<int>(j)) *
                           jw_sign(mid, static_cast<int>(i));
          out(mid | bi, m) += p * s;
        }
      }
      const Complex qc = op.pair_create(i, j);
      if (qc != 0.0 && i != j) {
        // 1/2 Qc_ij a+_i a+_j
        for (long m = 0; m < dim; ++m) {
          const unsigned mask = static_cast<unsigned>(m);
          if (mask & (bi | bj)) continue;
          const double s = jw_sign(mask, static_cast<int>(j)) *
                           jw_sign(mask | bj, static_cast<int>(i));
          out(mask | bi | bj, m) += 0.5 * qc * s;
        }
      }
      const Complex qa = op.pair_annihilate(i, j);
      if (qa != 0.0 && i != j) {
        // 1/2 Qa_ij a_j a_i
        for (long m = 0; m < dim; ++m) {
          const unsigned mask = static_cast<unsigned>(m);
          if ((mask & (bi | bj)) != (bi | bj)) continue;
          const double s = jw_sign(mask, static_cast<int>(i)) *
                           jw_sign(mask ^ bi, static_cast<int>(j));
          out((mask ^ bi) ^ bj, m) += 0.5 * qa * s;
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXcd dense_rho(const SingleParticleSpectrum& sp,
                           const BogoliubovTransform& bt) {
  const long L = bt.modes();
  check_sites(L);
  QuadraticOperator k_mode(OperatorBasis::EntanglementMode, L);
  for (long i = 0; i < L; ++i) k_mode.one_body(i, i) = sp.energies[i];
  const QuadraticOperator k_site = from_entanglement_basis(k_mode, bt);
  const MatrixXcd k_dense = densify(k_site);
  auto eig = detail::eigh_complex(k_dense, true);
  Eigen::VectorXd boltz = (-eig.values.array()).exp();
  const double z = boltz.sum();
  boltz /= z;
  return eig.vectors * boltz.asDiagonal() * eig.vectors.adjoint();
}

Eigen::MatrixXcd dense_schmidt_vectors(const BogoliubovTransform& bt,
                                       const std::vector<SchmidtState>& states) {
  const long L = bt.modes();
  check_sites(L);
  const long dim = 1L << L;

  VectorXcd vac;
  const VectorXcd ones = VectorXcd::Constant(dim, Complex{1.0, 0.0});
  std::vector<VectorXcd> refs{ones / ones.norm()};
  refs.push_back(VectorXcd::Unit(dim, 0));
  refs.push_back(VectorXcd::Unit(dim, dim - 1));
  for (const auto& ref : refs) {
    VectorXcd v = ref;
    for (int k = 0; k < L; ++k) v = apply_c(bt, k, apply_cdag(bt, k, v));
    if (v.norm() > 1e-8) {
      vac = v / v.norm();
      break;
    }
  }
  if (vac.size() == 0)
    throw numeric_error("failed to project out the mode vacuum");

  MatrixXcd out(dim, static_cast<long>(states.size()));
  for (size_t a = 0; a < states.size(); ++a) {
    VectorXcd v = vac;
    const auto& occ = states[a].occupation;
    for (auto it = occ.rbegin(); it != occ.rend(); ++it)
      v = apply_cdag(bt, *it, v);
    out.col(static_cast<long>(a)) = v;
  }
  return out;
}

double CrosscheckReport::worst() const {
  return std::max({max_weight_deviation, max_vector_residual,
                   max_orthonormality_defect, max_element_deviation});
}

CrosscheckReport crosscheck(const ModelParams& params, long sites,
                            const std::vector<int>& n_list, int count,
                            double epsilon) {
  check_sites(sites);
  const CorrelationMatrix gamma = build_correlation_matrix(params, sites);
  auto diag = diagonalize(gamma);
  const long dim = 1L << sites;
  const int k = static_cast<int>(std::min<long>(count, dim));
  const auto states = enumerate_schmidt(diag.spectrum, k);

  CrosscheckReport report;
  report.sites = sites;

  const MatrixXcd rho = dense_rho(diag.spectrum, diag.transform);
  const MatrixXcd vecs = dense_schmidt_vectors(diag.transform, states);

  // Weights against the dense spectrum of rho.
  auto rho_eigs = detail::eigh_complex(rho, false);
  std::vector<double> dense_weights(rho_eigs.values.data(),
                                    rho_eigs.values.data() + dim);
  std::sort(dense_weights.begin(), dense_weights.end(), std::greater<>());
  for (int a = 0; a < k; ++a)
    report.max_weight_deviation =
        std::max(report.max_weight_deviation,
                 std::abs(dense_weights[static_cast<size_t>(a)] - states[a].weight));

  // rho |v_alpha> = lambda^2 |v_alpha> and orthonormality.
  for (int a = 0; a < k; ++a) {
    const VectorXcd va = vecs.col(a);
    report.max_vector_residual = std::max(
        report.max_vector_residual, (rho * va - states[a].weight * va).norm());
    for (int b = 0; b < k; ++b) {
      const Complex olap = vecs.col(a).dot(vecs.col(b));
      report.max_orthonormality_defect =
          std::max(report.max_orthonormality_defect,
                   std::abs(olap - (a == b ? 1.0 : 0.0)));
    }
  }

  // Every H_n and L_n table against literal sandwiches.
  const LatticeProfile profile(sites / 2, epsilon);
  auto compare_op = [&](const std::string& name, const QuadraticOperator& op) {
    const QuadraticOperator rotated = to_entanglement_basis(op, diag.transform);
    const Eigen::MatrixXcd fast = matrix_element_table(rotated, states);
    const MatrixXcd dense_op = densify(op);
    double dev = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const Complex lit = vecs.col(a).dot(dense_op * vecs.col(b));
        dev = std::max(dev, std::abs(lit - fast(a, b)));
      }
    report.element_deviation_by_op[name] = dev;
    report.max_element_deviation = std::max(report.max_element_deviation, dev);
  };
  for (int n : n_list) {
    compare_op("H" + std::to_string(n), build_Hn(params, profile, n));
    if (n != 0) {
      compare_op("L" + std::to_string(n), build_Ln(params, profile, n));
      compare_op("L-" + std::to_string(n), build_Ln(params, profile, -n));
    }
  }
  return report;
}

}  // namespace entvir::oracle

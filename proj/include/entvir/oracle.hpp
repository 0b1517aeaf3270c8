#pragma once

#include <map>
#include <string>

#include "entvir/virasoro.hpp"

// Dense Fock-space verifier for small intervals. States live in the
// 2^L-dimensional occupation basis indexed by bitmasks (site j is bit j) with
// Jordan-Wigner sign strings, so every quadratic-operator code path can be
// checked against literal matrices.

namespace entvir::oracle {

constexpr int kMaxSites = 12;

Eigen::MatrixXcd densify(const QuadraticOperator& op);

// Dense normalized rho = exp(-sum_i e_i c+_i c_i)/Z in the site Fock basis.
Eigen::MatrixXcd dense_rho(const SingleParticleSpectrum& sp,
                           const BogoliubovTransform& bt);

// Dense Schmidt vectors built from the same modes the fast path uses: the
// c-vacuum from the projector prod_k c_k c+_k, then ordered c+ strings.
Eigen::MatrixXcd dense_schmidt_vectors(const BogoliubovTransform& bt,
                                       const std::vector<SchmidtState>& states);

struct CrosscheckReport {
  long sites = 0;
  double max_weight_deviation = 0.0;
  double max_vector_residual = 0.0;
  double max_orthonormality_defect = 0.0;
  double max_element_deviation = 0.0;
  std::map<std::string, double> element_deviation_by_op;

  double worst() const;
  bool ok(double tol = 1e-9) const { return worst() <= tol; }
};

// Full pipeline at small L against the dense representation: Schmidt weights
// vs rho eigenvalues, eigenvector residuals, and every H_n/L_n table entry.
CrosscheckReport crosscheck(const ModelParams& params, long sites,
                            const std::vector<int>& n_list, int count,
                            double epsilon);

}  // namespace entvir::oracle

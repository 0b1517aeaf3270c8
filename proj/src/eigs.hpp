#pragma once

#include <functional>
#include <Eigen/Dense>

// Internal dense-eigensolver and threading helpers. Large real-symmetric
// problems (correlation matrices up to 16384^2) go through LAPACK dsyevd;
// everything complex stays small and uses Eigen.

namespace entvir::detail {

int thread_count();
void set_blas_threads(int n);

struct EighReal {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, empty if !with_vectors
};
EighReal eigh_real(Eigen::MatrixXd a, bool with_vectors);

struct EighComplex {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};
EighComplex eigh_complex(const Eigen::MatrixXcd& a, bool with_vectors);

// Runs fn(begin, end) over a partition of [0, n) on up to thread_count()
// threads; fn must be safe on disjoint ranges.
void parallel_for(long n, const std::function<void(long, long)>& fn);

}  // namespace entvir::detail
